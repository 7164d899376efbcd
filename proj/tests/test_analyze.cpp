#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "gln/analyze.hpp"
#include "gln/minimize.hpp"
#include "gln/model.hpp"
#include "gln/radial.hpp"

using namespace gln;

namespace {

// h = 4/128 is exact in binary, so the origin and the key probe points sit
// exactly on nodes
const ModelParams kP = ModelParams::make(0.125, 0.0, 0.5);
const GridSpec kG = GridSpec::make(2.0, 129);

// rescaled unit vortex centered at x_bar, direction rotated by angle phi
// (reflected first when asked): the exact shape the core comparison models
VectorField2 synthetic_vortex(const Vec2& x_bar, double phi, bool reflect) {
  const RadialProfile& eta = standard_vortex_profile();
  const double sm = std::sqrt(mu_eval(kP, x_bar));
  const double c = std::cos(phi), s = std::sin(phi);
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i) {
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 d = kG.node(i, j) - x_bar;
      const double r = d.norm();
      if (r == 0.0) continue;
      const double amp = sm * eta.value_at_clamped(sm * r / kP.epsilon);
      double dx = d.x / r, dy = d.y / r;
      if (reflect) dy = -dy;
      u.at1(i, j) = amp * (c * dx - s * dy);
      u.at2(i, j) = amp * (s * dx + c * dy);
    }
  }
  u.zero_boundary();
  return u;
}

// strictly positive scalar bump: the bulk profile plus a small smooth floor
// so the tail has no exact zeros
VectorField2 positive_bump() {
  const double floor_amp = 0.2 * default_amp_tol(kP);
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 x = kG.node(i, j);
      u.at1(i, j) = std::sqrt(std::max(0.0, mu_eval(kP, x))) +
                    floor_amp * std::exp(-0.25 * x.norm_sq());
    }
  u.zero_boundary();
  return u;
}

VectorField2 affine_field(const Vec2& c, double scale, bool swapped) {
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 x = kG.node(i, j);
      if (swapped) {
        u.at1(i, j) = scale * (x.y - c.y);
        u.at2(i, j) = scale * (x.x - c.x);
      } else {
        u.at1(i, j) = scale * (x.x - c.x);
        u.at2(i, j) = scale * (x.y - c.y);
      }
    }
  return u;
}

}  // namespace

TEST_CASE("zero detection: off-node crossings refine to machine precision") {
  const Vec2 c{0.2605, 0.1115};
  const auto zeros = find_zeros(affine_field(c, 1.0, false), default_amp_tol(kP));
  REQUIRE(zeros.size() == 1);
  CHECK(std::abs(zeros[0].location.x - c.x) < 1e-9);
  CHECK(std::abs(zeros[0].location.y - c.y) < 1e-9);
  CHECK(zeros[0].winding == 1);
  CHECK(zeros[0].dip < 1e-9);

  const auto swapped = find_zeros(affine_field(c, 1.0, true), default_amp_tol(kP));
  REQUIRE(swapped.size() == 1);
  CHECK(swapped[0].winding == -1);
}

TEST_CASE("zero detection: a pinned on-node zero is caught by the dip scan") {
  const VectorField2 u = synthetic_vortex({0.0, 0.0}, 0.0, false);
  const auto zeros = find_zeros(u, default_amp_tol(kP));
  REQUIRE(zeros.size() == 1);
  CHECK(zeros[0].location.x == 0.0);
  CHECK(zeros[0].location.y == 0.0);
  CHECK(zeros[0].winding == 1);
  CHECK(zeros[0].dip == 0.0);
}

TEST_CASE("zero detection: two zeros, ordered by radius") {
  // roots of u1 at x = 0.26 and x = -0.36, both off the node lattice
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 x = kG.node(i, j);
      u.at1(i, j) = (x.x - 0.26) * (x.x + 0.36);
      u.at2(i, j) = x.y - 0.0115;
    }
  const auto zeros = find_zeros(u, 0.1);
  REQUIRE(zeros.size() == 2);
  CHECK(std::abs(zeros[0].location.x - 0.26) < 2e-3);
  CHECK(std::abs(zeros[0].location.y - 0.0115) < 2e-3);
  CHECK(zeros[0].winding == 1);
  CHECK(std::abs(zeros[1].location.x + 0.36) < 2e-3);
  CHECK(zeros[1].winding == -1);
}

TEST_CASE("zero detection ignores flat zero plateaus and smooth tails") {
  CHECK(find_zeros(VectorField2::zeros(kG), 0.1).empty());
  CHECK(find_zeros(positive_bump(), default_amp_tol(kP)).empty());
}

TEST_CASE("winding numbers on explicit degree fields") {
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 x = kG.node(i, j);
      u.at1(i, j) = x.x * x.x - x.y * x.y;  // (x + i y)^2
      u.at2(i, j) = 2.0 * x.x * x.y;
    }
  CHECK(winding_number(u, {0.0, 0.0}, 0.5) == 2);

  VectorField2 c = VectorField2::zeros(kG);
  for (double& v : c.u1) v = 1.0;
  CHECK(winding_number(c, {0.0, 0.0}, 0.5) == 0);

  VectorField2 tiny = VectorField2::zeros(kG);
  for (double& v : tiny.u1) v = 1e-11;
  CHECK_THROWS_WITH_AS(winding_number(tiny, {0.0, 0.0}, 0.5),
                       doctest::Contains("near-zero"), std::runtime_error);

  CHECK_THROWS_AS(winding_number(c, {0.0, 0.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(winding_number(c, {0.0, 0.0}, 5.0), std::invalid_argument);
}

TEST_CASE("rim alignment of radial, tangential, and inward fields") {
  VectorField2 out = VectorField2::zeros(kG), tan = VectorField2::zeros(kG),
               in = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 x = kG.node(i, j);
      const double r = x.norm();
      if (r == 0.0) continue;
      out.at1(i, j) = x.x / r;
      out.at2(i, j) = x.y / r;
      tan.at1(i, j) = -x.y / r;
      tan.at2(i, j) = x.x / r;
      in.at1(i, j) = -x.x / r;
      in.at2(i, j) = -x.y / r;
    }
  CHECK(alignment(out, 0.9, 1.2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(alignment(tan, 0.9, 1.2)) < 1e-12);
  CHECK(alignment(in, 0.9, 1.2) == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(alignment(VectorField2::zeros(kG), 0.9, 1.2),
                       doctest::Contains("zero amplitude"), std::runtime_error);
  CHECK_THROWS_AS(alignment(out, 1.2, 0.9), std::invalid_argument);
  CHECK_THROWS_WITH_AS(alignment(out, 0.001, 0.002),
                       doctest::Contains("no grid nodes"), std::invalid_argument);
}

TEST_CASE("bulk deviation and the amplitude bound constant") {
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j)
      u.at1(i, j) = 1.05 * std::sqrt(std::max(0.0, mu_eval(kP, kG.node(i, j))));
  CHECK(tf_deviation(u, kP, 0.8) ==
        doctest::Approx(0.05 * std::sqrt(0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(tf_deviation(u, kP, 1.5), std::invalid_argument);

  VectorField2 spike = VectorField2::zeros(kG);
  spike.at2(64, 80) = 2.0;  // node (0.5, 0)
  const double expect = 2.0 / (std::sqrt(mu_eval(kP, {0.5, 0.0})) + 0.5);
  CHECK(bound_constant(spike, kP) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("far-field ring check against the forced tail formula") {
  const ModelParams p = ModelParams::make(0.125, 1.5, 0.5);
  VectorField2 u = VectorField2::zeros(kG);
  for (int i = 0; i < kG.n; ++i)
    for (int j = 0; j < kG.n; ++j) {
      const Vec2 x = kG.node(i, j);
      const double mu = mu_eval(p, x);
      if (mu < -0.1) {
        const Vec2 f = f_eval(p, x);
        u.at1(i, j) = -p.epsilon * p.a * f.x / mu;
        u.at2(i, j) = -p.epsilon * p.a * f.y / mu;
      }
    }
  const auto dev = outer_check(u, p, p.rho + 0.5);
  REQUIRE(dev.has_value());
  CHECK(*dev < 0.01);

  CHECK(!outer_check(u, kP, kP.rho + 0.5).has_value());  // a = 0
  CHECK_THROWS_AS(outer_check(u, p, p.rho + 0.1), std::invalid_argument);
  CHECK_THROWS_AS(outer_check(u, p, 5.0), std::invalid_argument);
}

TEST_CASE("core comparison: exact model fits, bumps do not, rim cores throw") {
  const VectorField2 u = synthetic_vortex({0.0, 0.0}, 0.3, false);
  Zero z;
  z.location = {0.0, 0.0};
  bool reflected = true;
  const double m = core_profile_match(u, z, kP, standard_vortex_profile(), &reflected);
  CHECK(m < 1e-6);
  CHECK(!reflected);

  const VectorField2 ur = synthetic_vortex({0.0, 0.0}, 0.3, true);
  const double mr = core_profile_match(ur, z, kP, standard_vortex_profile(), &reflected);
  CHECK(mr < 1e-6);
  CHECK(reflected);

  CHECK(core_profile_match(positive_bump(), z, kP) > 0.3);

  Zero rim;
  rim.location = {0.75, 0.0};
  CHECK_THROWS_WITH_AS(core_profile_match(u, rim, kP),
                       doctest::Contains("validity"), std::domain_error);
}

TEST_CASE("classification: centered vortex") {
  const VectorField2 u = synthetic_vortex({0.0, 0.0}, 0.3, false);
  AnalyzeOptions opts;
  opts.align_in = 0.9;
  opts.align_out = 1.2;
  const AnalysisReport rep = analyze_field(u, kP, opts);
  REQUIRE(rep.zeros.size() == 1);
  CHECK(rep.winding_loop == 1);
  CHECK(rep.phase.label == PhaseLabel::standard_vortex_center);
  CHECK(!rep.phase.ambiguous);
  CHECK(!rep.outer_dev.has_value());
  const std::string text = report_to_text(rep, kP);
  CHECK(text.find("StandardVortexCenter") != std::string::npos);
  CHECK(text.find("matching core") != std::string::npos);
}

TEST_CASE("classification: vortex parked between center and rim") {
  const VectorField2 u = synthetic_vortex({0.4, 0.0}, 0.0, false);
  const AnalysisReport rep = analyze_field(u, kP);
  REQUIRE(rep.zeros.size() == 1);
  // the component zero lines sit on node rows, so the dip scan reports the
  // nearest node
  CHECK(std::abs(rep.zeros[0].location.x - 0.4) < 0.01);
  CHECK(rep.zeros[0].location.y == 0.0);
  CHECK(rep.zeros[0].winding == 1);
  CHECK(rep.phase.label == PhaseLabel::standard_vortex_off_center);
  CHECK(!rep.phase.ambiguous);
  const std::string text = report_to_text(rep, kP);
  CHECK(text.find("away from the origin") != std::string::npos);
}

TEST_CASE("classification: rim zero with suppressed amplitude") {
  const VectorField2 u = affine_field({kP.rho + 0.1, 0.0}, 0.5, false);
  const AnalysisReport rep = analyze_field(u, kP);
  REQUIRE(rep.zeros.size() == 1);
  CHECK(rep.zeros[0].location.norm() > kP.rho - 0.15);
  CHECK(rep.phase.label == PhaseLabel::shadow_vortex);
  CHECK(!rep.phase.ambiguous);
}

TEST_CASE("classification: rim zero with a loud neighborhood is ambiguous") {
  const VectorField2 u = affine_field({0.75, 0.0}, 1.0, false);
  const AnalysisReport rep = analyze_field(u, kP);
  REQUIRE(rep.zeros.size() == 1);
  CHECK(rep.phase.label == PhaseLabel::shadow_vortex);
  CHECK(rep.phase.ambiguous);
  const std::string text = report_to_text(rep, kP);
  CHECK(text.find("no rule matched cleanly") != std::string::npos);
  CHECK(text.find("(ambiguous)") != std::string::npos);
}

TEST_CASE("classification: positive bump reports no zeros") {
  AnalyzeOptions opts;
  opts.align_in = 0.9;
  opts.align_out = 1.2;
  const AnalysisReport rep = analyze_field(positive_bump(), kP, opts);
  CHECK(rep.zeros.empty());
  CHECK(rep.winding_loop == 0);
  CHECK(rep.phase.label == PhaseLabel::no_zero);
  CHECK(rep.tf_sup_dev < 0.03);
  CHECK(rep.alignment_min == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rep.bound_K > 0.0);
  CHECK(rep.bound_K < 1.0);
}

TEST_CASE("end to end on a computed minimum without forcing") {
  const ModelParams p = ModelParams::make(0.2, 0.0, 0.5);
  const GridSpec g = GridSpec::make(3.0, 97);
  MinimizeOptions mo;
  mo.residual_tol = 1e-8;
  mo.max_iters = 30000;
  const MinimizeResult res =
      minimize_from_seed(p, g, SeedKind::thomas_fermi(), mo);
  REQUIRE(res.converged);

  const AnalysisReport rep = analyze_field(res.field, p);
  CHECK(rep.zeros.empty());
  CHECK(rep.phase.label == PhaseLabel::no_zero);
  CHECK(rep.winding_loop == 0);
  CHECK(rep.tf_sup_dev < 0.25);
  CHECK(rep.bound_K < 2.0);
  CHECK(std::isnan(rep.alignment_min));  // default annulus is empty at this eps
  CHECK(!rep.outer_dev.has_value());
}
