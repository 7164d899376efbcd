#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gln/field_io.hpp"
#include "gln/model.hpp"

using namespace gln;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("gln_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string operator/(const std::string& name) const {
    return (dir / name).string();
  }
};

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("vector field round-trip is bit-identical") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(1.75, 19);
  VectorField2 u = VectorField2::zeros(g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (std::size_t k = 0; k < u.u1.size(); ++k) {
    u.u1[k] = dist(rng);
    u.u2[k] = dist(rng);
  }
  // values that lose digits under naive text round-trips
  u.u1[0] = -0.0;
  u.u1[1] = 5e-324;
  u.u2[2] = 1.7976931348623157e308;
  u.u2[3] = 0.1;

  const std::string path = tmp / "u.glnf";
  write_field(path, u);
  const VectorField2 back = read_vector_field(path);
  REQUIRE(back.grid.same_as(g));
  for (std::size_t k = 0; k < u.u1.size(); ++k) {
    CHECK(same_bits(back.u1[k], u.u1[k]));
    CHECK(same_bits(back.u2[k], u.u2[k]));
  }
}

TEST_CASE("scalar field round-trip") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(0.5, 16);
  ScalarField f = ScalarField::zeros(g);
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = 0.3 * double(k);
  const std::string path = tmp / "s.glnf";
  write_field(path, f);
  const ScalarField back = read_scalar_field(path);
  REQUIRE(back.grid.same_as(g));
  for (std::size_t k = 0; k < f.values.size(); ++k)
    CHECK(same_bits(back.values[k], f.values[k]));
}

TEST_CASE("malformed files are rejected with specific messages") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(1.0, 17);

  const std::string bad_magic = tmp / "bad_magic.glnf";
  {
    std::ofstream out(bad_magic, std::ios::binary);
    out << "JUNK1" << std::string(200, '\0');
  }
  CHECK_THROWS_WITH(read_vector_field(bad_magic), "not a GLNF1 file");

  const std::string cut = tmp / "cut.glnf";
  {
    VectorField2 u = VectorField2::zeros(g);
    write_field(cut, u);
    std::string blob = slurp(cut);
    blob.resize(blob.size() - 8);
    std::ofstream out(cut, std::ios::binary | std::ios::trunc);
    out << blob;
  }
  CHECK_THROWS_WITH(read_vector_field(cut), "truncated payload");

  // component-count mismatches in either direction
  const std::string scalar_path = tmp / "scalar.glnf";
  write_field(scalar_path, ScalarField::zeros(g));
  CHECK_THROWS_WITH(read_vector_field(scalar_path), "truncated payload");

  const std::string vector_path = tmp / "vector.glnf";
  write_field(vector_path, VectorField2::zeros(g));
  CHECK_THROWS_WITH(read_scalar_field(vector_path), "truncated payload");

  CHECK_THROWS(read_vector_field(tmp / "does_not_exist.glnf"));
}

TEST_CASE("format_g17 round-trips doubles through text") {
  for (double v : {3.141592653589793, 0.1, -1.0 / 3.0, 1e-300, 2.2250738585072014e-308,
                   123456789.123456789}) {
    const std::string s = format_g17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("field CSV layout") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(1.0, 16);
  VectorField2 u = VectorField2::zeros(g);
  u.at1(3, 4) = 0.6;
  u.at2(3, 4) = -0.8;
  const std::string path = tmp / "u.csv";
  write_field_csv(path, u);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# n = 16", 0) == 0);
  std::getline(in, line);
  CHECK(line == "x,y,u1,u2,amp");

  int rows = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",0.59999999999999998,") != std::string::npos) {
      const double amp = std::strtod(line.c_str() + line.rfind(',') + 1, nullptr);
      CHECK(amp == doctest::Approx(1.0).epsilon(1e-15));
      found = true;
    }
  }
  CHECK(rows == 16 * 16);
  CHECK(found);
}

TEST_CASE("profile CSV header passthrough and length check") {
  TempDir tmp;
  const std::string path = tmp / "profile.csv";
  write_profile_csv(path, {0.0, 0.5, 1.0}, {1.0, 0.25, 0.0}, {"note line"});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# note line");
  std::getline(in, line);
  CHECK(line == "r,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  CHECK_THROWS_AS(write_profile_csv(tmp / "bad.csv", {0.0}, {1.0, 2.0}, {}),
                  std::invalid_argument);
}

TEST_CASE("quicklook image: grayscale ramp and red markers") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(1.0, 17);
  ScalarField f = ScalarField::zeros(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) f.at(i, j) = double(j);

  const std::string path = tmp / "f.ppm";
  write_ppm(path, f, {Vec2{-1.0, -1.0}});
  const std::string blob = slurp(path);

  const std::string header = "P6\n17 17\n255\n";
  REQUIRE(blob.rfind(header, 0) == 0);
  REQUIRE(blob.size() == header.size() + std::size_t(17) * 17 * 3);

  const auto* pix = reinterpret_cast<const unsigned char*>(blob.data() + header.size());
  // grid row i = 16 (top of the image) holds the unmarked ramp
  const std::size_t top_left = 0;
  CHECK(pix[top_left] == 0);
  const std::size_t top_right = 3 * 16;
  CHECK(pix[top_right] == 255);
  CHECK(pix[top_right + 1] == 255);
  // marker at physical (-1,-1) is grid node (0,0), bottom-left of the image
  const std::size_t bottom_left = 3 * (std::size_t(16) * 17);
  CHECK(pix[bottom_left] == 255);
  CHECK(pix[bottom_left + 1] == 0);
  CHECK(pix[bottom_left + 2] == 0);
}
