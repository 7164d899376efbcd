#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gln/model.hpp"
#include "gln/radial.hpp"

namespace gln {

struct Zero {
  Vec2 location{};
  int winding = 0;
  double dip = 0.0;  // |u| at the refined location
};

/// Scan cells for simultaneous sign changes of both components (plus
/// amplitude dips under amp_tol at local minima), refine each hit by a
/// bilinear root solve, and attach the winding of a small loop (radius 4h,
/// falling back to 8h). An empty list is a valid result.
std::vector<Zero> find_zeros(const VectorField2& u, double amp_tol);

/// Degree of u/|u| along the circle of given radius: accumulated angle
/// increments over >= 256 samples divided by 2 pi. Throws
/// "loop through near-zero" when |u| < 1e-10 on the loop and
/// "ill-conditioned loop" when the total misses an integer by more than
/// 0.05.
int winding_number(const VectorField2& u, Vec2 center, double radius);

/// Minimum of (u . x/|x|) / |u| over grid nodes in the annulus; errors on a
/// zero-amplitude node, listing offending locations.
double alignment(const VectorField2& u, double r_in, double r_out);

/// sup over |x| <= r_frac * rho of | |u| - sqrt(mu) |.
double tf_deviation(const VectorField2& u, const ModelParams& p,
                    double r_frac);

/// sup over all nodes of |u| / (sqrt(mu^+) + eps^{1/3}).
double bound_constant(const VectorField2& u, const ModelParams& p);

/// sup over the circle |x| = r0 of |u/eps + (a/mu(r0)) f| divided by the
/// far-field scale a f(r0)/|mu(r0)|; empty at a = 0 (undefined there).
std::optional<double> outer_check(const VectorField2& u, const ModelParams& p,
                                  double r0);

/// Relative L2 misfit between u(x_bar + eps s), |s| <= 5, and the rescaled
/// unit-vortex model sqrt(mu(l)) g eta(sqrt(mu(l)) s) over g in O(2).
/// Throws "core outside validity region" when mu at the zero is <= 0.1.
double core_profile_match(const VectorField2& u, const Zero& z,
                          const ModelParams& p, const RadialProfile& eta,
                          bool* reflected = nullptr);
double core_profile_match(const VectorField2& u, const Zero& z,
                          const ModelParams& p);

enum class PhaseLabel {
  no_zero,
  shadow_vortex,
  standard_vortex_off_center,
  standard_vortex_center,
};

std::string phase_label_name(PhaseLabel label);

struct Phase {
  PhaseLabel label = PhaseLabel::no_zero;
  bool ambiguous = false;
  std::vector<std::string> evidence;
};

/// Decision table; when several rules fire the highest-precedence label wins
/// (center > off-center > shadow > no-zero) and the ambiguity flag is set.
Phase classify(const VectorField2& u, const std::vector<Zero>& zeros,
               const ModelParams& p);

struct AnalyzeOptions {
  double amp_tol = 0.0;   // <= 0 selects the layer-scale default
  double r_frac = 0.8;
  double winding_radius = 0.0;  // <= 0 selects rho + 0.3
  double align_in = 0.0;        // <= 0 selects rho + 2 eps^{2/3}
  double align_out = 0.0;       // <= 0 selects rho + 0.4
  double r0 = 0.0;              // <= 0 selects rho + 0.5
};

struct AnalysisReport {
  std::vector<Zero> zeros;
  std::optional<int> winding_loop;
  std::string winding_note;
  double tf_sup_dev = 0.0;
  double alignment_min = 0.0;
  double bound_K = 0.0;
  std::optional<double> outer_dev;
  Phase phase;
};

AnalysisReport analyze_field(const VectorField2& u, const ModelParams& p,
                             const AnalyzeOptions& opts = {});

std::string report_to_text(const AnalysisReport& rep, const ModelParams& p);

}  // namespace gln
