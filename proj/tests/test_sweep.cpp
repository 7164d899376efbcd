#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "gln/field_io.hpp"
#include "gln/sweep.hpp"

using namespace gln;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() /
           ("gln_sweep_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

SweepRow labeled_row(double eps, double b, std::string label) {
  SweepRow r;
  r.eps = eps;
  r.b = b;
  r.phase_label = std::move(label);
  return r;
}

}  // namespace

TEST_CASE("forcing scalings") {
  const double eps = 0.05, b = 1.3;
  const double l = std::abs(std::log(eps));
  CHECK(scaling_a(SweepScaling::linear_log, eps, b) == b * eps * l);
  CHECK(scaling_a(SweepScaling::square_log, eps, b) == b * eps * l * l);
  CHECK(scaling_a(SweepScaling::raw, eps, b) == b);
  CHECK(scaling_name(SweepScaling::linear_log) == "linear_log");
  CHECK(scaling_name(SweepScaling::square_log) == "square_log");
  CHECK(scaling_name(SweepScaling::raw) == "raw");
}

TEST_CASE("sweep input validation") {
  SweepSpec s;
  s.b_values = {0.0};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);  // no eps
  s.epsilons = {1.2};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.epsilons = {0.1};
  s.b_values = {-1.0};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.b_values = {0.0};
  s.n = 8;
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
}

TEST_CASE("default seed set starts scalar and adds vortex starts") {
  const ModelParams p = ModelParams::make(0.1, 0.0, 0.5);
  const auto seeds = default_sweep_seeds(p);
  REQUIRE(seeds.size() == 3);
  CHECK(seeds[0].describe() == "thomas_fermi");
  CHECK(seeds[1].describe().rfind("vortex(", 0) == 0);
  CHECK(seeds[2].describe().rfind("vortex(", 0) == 0);
}

TEST_CASE("transition estimates from labeled columns") {
  SweepResult res;
  res.rows.push_back(labeled_row(0.1, 0.0, "NoZero"));
  res.rows.push_back(labeled_row(0.1, 1.0, "NoZero"));
  res.rows.push_back(labeled_row(0.1, 2.0, "StandardVortexCenter"));
  res.rows.push_back(labeled_row(0.1, 3.0, "StandardVortexCenter"));
  const Transition tr =
      transition_estimate(res, 0.1, "NoZero", "StandardVortexCenter");
  CHECK(tr.b == doctest::Approx(1.5));
  CHECK(tr.monotone);

  SweepResult mixed;
  mixed.rows.push_back(labeled_row(0.1, 0.0, "NoZero"));
  mixed.rows.push_back(labeled_row(0.1, 1.0, "StandardVortexCenter"));
  mixed.rows.push_back(labeled_row(0.1, 2.0, "NoZero"));
  mixed.rows.push_back(labeled_row(0.1, 3.0, "StandardVortexCenter"));
  const Transition tm =
      transition_estimate(mixed, 0.1, "NoZero", "StandardVortexCenter");
  CHECK(tm.b == doctest::Approx(0.5));
  CHECK(!tm.monotone);

  SweepResult gapped;
  gapped.rows.push_back(labeled_row(0.1, 0.0, "NoZero"));
  gapped.rows.push_back(labeled_row(0.1, 1.0, "ShadowVortex"));
  gapped.rows.push_back(labeled_row(0.1, 2.0, "StandardVortexCenter"));
  const Transition tg =
      transition_estimate(gapped, 0.1, "NoZero", "StandardVortexCenter");
  CHECK(tg.b == doctest::Approx(1.0));
  CHECK(!tg.monotone);

  CHECK_THROWS_WITH_AS(transition_estimate(res, 0.1, "ShadowVortex", "NoZero"),
                       doctest::Contains("no transition"), std::runtime_error);
}

TEST_CASE("radial reference gap vanishes without forcing") {
  const ModelParams p = ModelParams::make(0.15, 0.0, 0.5);
  const GridSpec g = GridSpec::make(p.rho + 1.5, 97);
  MinimizeOptions opts;
  const double gap = symmetry_gap(p, g, {}, opts);
  CHECK(gap >= 0.0);
  CHECK(gap <= 1e-7);

  MinimizeOptions dead;
  dead.max_iters = 0;
  CHECK_THROWS_WITH_AS(symmetry_gap(p, g, {}, dead),
                       doctest::Contains("no seed converged"),
                       std::runtime_error);
}

TEST_CASE("a small forced sweep fills ordered rows and its output files") {
  TempDir tmp;
  SweepSpec s;
  s.epsilons = {0.15};
  s.b_values = {2.0, 0.0};  // run_sweep sorts the column
  s.scaling = SweepScaling::raw;
  s.chi = 0.5;
  s.n = 81;
  const ModelParams p0 = ModelParams::make(0.15, 0.0, 0.5);
  s.half_width = p0.rho + 1.5;
  s.seeds = {SeedKind::thomas_fermi(), SeedKind::vortex({0.0, 0.0}, 1)};
  s.out_dir = (tmp.path / "points").string();

  const SweepResult res = run_sweep(s);
  REQUIRE(res.rows.size() == 2);
  const SweepRow& r0 = res.rows[0];
  const SweepRow& r1 = res.rows[1];
  CHECK(r0.eps == 0.15);
  CHECK(r0.b == 0.0);
  CHECK(r0.a == 0.0);
  CHECK(r1.b == 2.0);
  CHECK(r1.a == 2.0);

  CHECK(r0.status == "ok");
  CHECK(r0.phase_label == "NoZero");
  CHECK(r0.zero_radii.empty());
  REQUIRE(r0.winding_loop.has_value());
  CHECK(*r0.winding_loop == 0);
  CHECK(r0.symmetry_gap >= 0.0);
  CHECK(r0.symmetry_gap <= 1e-7);
  CHECK(!r0.symmetry_broken);
  CHECK(r0.residual <= s.minimize.residual_tol);
  CHECK(r0.iters > 0);

  CHECK(r1.status.rfind("ok", 0) == 0);
  CHECK(r1.phase_label != "error");
  CHECK(std::isfinite(r1.energy_2d));
  CHECK(r1.energy_2d < r0.energy_2d);  // forcing can only help
  CHECK(r1.winding_loop.has_value());

  // per-point artifacts
  const VectorField2 saved =
      read_vector_field((tmp.path / "points" / "point_e0_b0.glnf").string());
  CHECK(saved.grid.n == 81);
  const std::string report = slurp(tmp.path / "points" / "point_e0_b0.txt");
  CHECK(report.find("energy_2d = ") != std::string::npos);
  CHECK(report.find("phase: NoZero") != std::string::npos);

  // CSV round trip
  const std::string csv_path = (tmp.path / "sweep.csv").string();
  write_sweep_csv(res, csv_path);
  const std::string csv = slurp(csv_path);
  const std::string header =
      "eps,b,a,energy_2d,energy_reference,energy_scalar_ref,"
      "energy_equivariant_ref,symmetry_gap,symmetry_broken,phase,"
      "ambiguous,zero_count,zero_radii,winding_loop,tf_dev,alignment_min,"
      "bound_K,outer_dev,iters,residual,status";
  REQUIRE(csv.rfind(header + "\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind(format_g17(0.15) + ",0,0,", 0) == 0);
  CHECK(line.find(",NoZero,") != std::string::npos);
  CHECK(line.rfind("\"ok\"") == line.size() - 4);
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind(format_g17(0.15) + "," + format_g17(2.0) + ",", 0) == 0);
  CHECK(!std::getline(lines, line));

  const std::string gp_path = (tmp.path / "phase.gp").string();
  write_phase_script(res, gp_path);
  const std::string gp = slurp(gp_path);
  CHECK(gp.rfind("set terminal pngcairo", 0) == 0);
  CHECK(gp.find("'-' using 1:2") != std::string::npos);
  CHECK(gp.find("NoZero") != std::string::npos);
}

TEST_CASE("row slots do not depend on the worker count") {
  SweepSpec s;
  s.epsilons = {0.18};
  s.b_values = {0.0, 1.0};
  s.scaling = SweepScaling::raw;
  s.n = 49;
  const ModelParams p0 = ModelParams::make(0.18, 0.0, 0.5);
  s.half_width = p0.rho + 1.2;
  s.continuation = false;  // two independent chains
  s.threads = 1;
  const SweepResult a = run_sweep(s);
  s.threads = 2;
  const SweepResult b = run_sweep(s);
  REQUIRE(a.rows.size() == 2);
  REQUIRE(b.rows.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(a.rows[k].b == b.rows[k].b);
    CHECK(same_bits(a.rows[k].energy_2d, b.rows[k].energy_2d));
    CHECK(same_bits(a.rows[k].symmetry_gap, b.rows[k].symmetry_gap));
    CHECK(a.rows[k].phase_label == b.rows[k].phase_label);
    CHECK(a.rows[k].iters == b.rows[k].iters);
    CHECK(same_bits(a.rows[k].residual, b.rows[k].residual));
    CHECK(a.rows[k].status == b.rows[k].status);
    REQUIRE(a.rows[k].zero_radii.size() == b.rows[k].zero_radii.size());
    for (std::size_t z = 0; z < a.rows[k].zero_radii.size(); ++z)
      CHECK(same_bits(a.rows[k].zero_radii[z], b.rows[k].zero_radii[z]));
  }
}
