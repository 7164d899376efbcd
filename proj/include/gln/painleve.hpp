#pragma once

#include <optional>
#include <vector>

#include "gln/model.hpp"
#include "gln/radial.hpp"

namespace gln {

enum class P2Branch { plus, minus };

/// Boundary-layer profile problem y'' - s y - 2 y^3 - alpha = 0 on [-S, S].
/// The plus branch stays positive and decays at +infinity; the minus branch
/// changes sign once. Left Dirichlet data is the outer balance +-sqrt(S/2);
/// right data is 0 for alpha = 0, otherwise the real root of
/// y^3 + S y/2 + alpha/2 = 0 nearest -alpha/S.
struct PainleveSpec {
  double alpha = 0.0;
  P2Branch branch = P2Branch::plus;
  double S = 12.0;
  int m = 6001;

  static PainleveSpec make(double alpha, P2Branch branch, double S, int m);
};

RadialProfile solve_p2(const PainleveSpec& spec,
                       std::vector<double>* newton_trace = nullptr);

/// Real root of y^3 + S y/2 + alpha/2 = 0 nearest -alpha/S (the decaying
/// outer balance at s = +S).
double p2_right_boundary_value(double S, double alpha);

/// Rectangle in stretched boundary-layer coordinates (s1 across the
/// interface, s2 along it).
struct StripRect {
  double s1_min = 0.0, s1_max = 0.0;
  double s2_min = 0.0, s2_max = 0.0;
};

struct StripField {
  StripRect rect;
  int m1 = 0, m2 = 0;
  std::vector<double> u1, u2;

  double h1() const { return (rect.s1_max - rect.s1_min) / (m1 - 1); }
  double h2() const { return (rect.s2_max - rect.s2_min) / (m2 - 1); }
  double s1(int j) const { return rect.s1_min + j * h1(); }
  double s2(int i) const { return rect.s2_min + i * h2(); }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * m1 + j;
  }
};

enum class StripBC { from_1d, custom };

struct StripOptions {
  int max_iters = 200000;
  double residual_tol = 1e-8;
};

struct StripResult {
  StripField field;
  double energy = 0.0;
  double residual_sup = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<double> energy_trace;
};

/// Two-dimensional layer energy on the rectangle,
///   E = int 1/2 |grad u|^2 + 1/2 s1 |u|^2 + 1/2 |u|^4 + alpha u1,
/// with all four sides Dirichlet. from_1d pins the boundary to the 1D
/// minimal branch extended constant in s2; custom takes the boundary trace
/// from `custom_bc` (interior values ignored).
StripResult minimize_p2_strip(double alpha, P2Branch branch,
                              const StripRect& rect, int m1, int m2,
                              StripBC bc, const StripField* custom_bc = nullptr,
                              const StripOptions& opts = {});

double strip_energy(const StripField& u, double alpha);

/// 1D branch profile discretized on exactly the strip's s1 nodes (endpoint
/// values pinned from a fine global solve); extending it constant in s2
/// gives a discrete critical point of the strip energy.
std::vector<double> strip_reference_profile(double alpha, P2Branch branch,
                                            const StripRect& rect, int m1);

/// Boundary-layer window of a planar field near the interface point
/// rho e^{i theta}: samples of
///   w(s) = 2^{-1/2} ((-mu1) eps)^{-1/3} v(xi + eps^{2/3} (s1 e_r + s2 e_t)
///          / (-mu1)^{1/3})
/// expressed in the frame (e_r, e_t) = (radial, tangential). In these
/// coordinates the window of a minimizer approaches a bounded layer-profile
/// solution, so w compares directly against solve_p2.
struct LayerWindow {
  double theta = 0.0;
  StripRect rect;
  int m1 = 0, m2 = 0;
  std::vector<double> w1, w2;

  double s1(int j) const { return rect.s1_min + j * (rect.s1_max - rect.s1_min) / (m1 - 1); }
  double s2(int i) const { return rect.s2_min + i * (rect.s2_max - rect.s2_min) / (m2 - 1); }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * m1 + j;
  }
};

LayerWindow extract_layer(const VectorField2& v, const ModelParams& p,
                          double theta, const StripRect& rect, int m1, int m2);

}  // namespace gln
