#include "gln/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gln {

namespace {

constexpr char kMagic[5] = {'G', 'L', 'N', 'F', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) buf.push_back(char((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) buf.push_back(char((bits >> (8 * b)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = bits << 8 | p[b];
  return std::bit_cast<double>(bits);
}

void write_blob(const std::string& path, const std::string& blob) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(blob.data(), std::streamsize(blob.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string header_blob(const GridSpec& g) {
  std::string blob(kMagic, 5);
  put_u32(blob, std::uint32_t(g.n));
  put_f64(blob, g.half_width);
  return blob;
}

struct RawField {
  GridSpec grid;
  std::vector<std::vector<double>> components;
};

RawField read_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 5 || std::memcmp(data.data(), kMagic, 5) != 0)
    throw std::runtime_error("not a GLNF1 file");
  if (data.size() < 5 + 4 + 8) throw std::runtime_error("truncated payload");
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
  const std::uint32_t n = get_u32(bytes + 5);
  const double L = get_f64(bytes + 9);
  const std::size_t head = 17;
  const std::size_t per_comp = std::size_t(n) * n * 8;
  const std::size_t payload = data.size() - head;
  if (n < 16 || per_comp == 0 || payload % per_comp != 0 ||
      payload / per_comp < 1 || payload / per_comp > 2)
    throw std::runtime_error("truncated payload");
  RawField raw;
  raw.grid = GridSpec::make(L, int(n));
  const std::size_t ncomp = payload / per_comp;
  for (std::size_t c = 0; c < ncomp; ++c) {
    std::vector<double> vals(std::size_t(n) * n);
    for (std::size_t k = 0; k < vals.size(); ++k)
      vals[k] = get_f64(bytes + head + c * per_comp + 8 * k);
    raw.components.push_back(std::move(vals));
  }
  return raw;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) {
  std::string blob = header_blob(f.grid);
  blob.reserve(blob.size() + f.values.size() * 8);
  for (double v : f.values) put_f64(blob, v);
  write_blob(path, blob);
}

void write_field(const std::string& path, const VectorField2& f) {
  std::string blob = header_blob(f.grid);
  blob.reserve(blob.size() + 16 * f.u1.size());
  for (double v : f.u1) put_f64(blob, v);
  for (double v : f.u2) put_f64(blob, v);
  write_blob(path, blob);
}

ScalarField read_scalar_field(const std::string& path) {
  RawField raw = read_raw(path);
  if (raw.components.size() != 1)
    throw std::runtime_error("truncated payload");
  return {raw.grid, std::move(raw.components[0])};
}

VectorField2 read_vector_field(const std::string& path) {
  RawField raw = read_raw(path);
  if (raw.components.size() != 2)
    throw std::runtime_error("truncated payload");
  return {raw.grid, std::move(raw.components[0]),
          std::move(raw.components[1])};
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(const std::string& path, const VectorField2& f) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# n = " << f.grid.n << ", L = " << format_g17(f.grid.half_width)
      << "\n";
  out << "x,y,u1,u2,amp\n";
  for (int i = 0; i < f.grid.n; ++i) {
    for (int j = 0; j < f.grid.n; ++j) {
      const Vec2 x = f.grid.node(i, j);
      const Vec2 v = f.at(i, j);
      out << format_g17(x.x) << ',' << format_g17(x.y) << ','
          << format_g17(v.x) << ',' << format_g17(v.y) << ','
          << format_g17(v.norm()) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_profile_csv(const std::string& path,
                       const std::vector<double>& abscissa,
                       const std::vector<double>& value,
                       const std::vector<std::string>& header) {
  if (abscissa.size() != value.size())
    throw std::invalid_argument("profile CSV: length mismatch");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& line : header) out << "# " << line << "\n";
  out << "r,value\n";
  for (std::size_t k = 0; k < abscissa.size(); ++k)
    out << format_g17(abscissa[k]) << ',' << format_g17(value[k]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_ppm(const std::string& path, const ScalarField& f,
               const std::vector<Vec2>& markers) {
  const int n = f.grid.n;
  double vmax = 0.0;
  for (double v : f.values) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;

  std::string pix(std::size_t(n) * n * 3, '\0');
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = std::clamp(f.at(i, j) / vmax, 0.0, 1.0);
      const auto g = char(int(255.0 * v + 0.5));
      // image rows top-down, grid rows bottom-up
      const std::size_t k = 3 * (std::size_t(n - 1 - i) * n + j);
      pix[k] = pix[k + 1] = pix[k + 2] = g;
    }
  }
  const double L = f.grid.half_width, h = f.grid.spacing();
  for (const Vec2& m : markers) {
    const int j0 = int(std::lround((m.x + L) / h));
    const int i0 = int(std::lround((m.y + L) / h));
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const int i = i0 + di, j = j0 + dj;
        if (i < 0 || j < 0 || i >= n || j >= n) continue;
        const std::size_t k = 3 * (std::size_t(n - 1 - i) * n + j);
        pix[k] = char(255);
        pix[k + 1] = 0;
        pix[k + 2] = 0;
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P6\n" << n << ' ' << n << "\n255\n";
  out.write(pix.data(), std::streamsize(pix.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gln
