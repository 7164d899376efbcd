#pragma once

#include <vector>

#include "gln/model.hpp"

namespace gln {

/// Uniform 1D grid on [r_min, r_max]; r_min = 0 for radial profiles, the
/// line case (r_min < 0) serves the boundary-layer equation.
struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int m = 0;

  static RadialGrid make(double r_min, double r_max, int m);
  static RadialGrid radial(double r_max, int m) { return make(0.0, r_max, m); }

  double spacing() const { return (r_max - r_min) / (m - 1); }
  double r(int i) const { return r_min + i * spacing(); }
};

enum class ProfileKind { scalar, equivariant, gl_vortex, painleve };

struct RadialProfile {
  RadialGrid grid;
  std::vector<double> values;
  ProfileKind kind = ProfileKind::scalar;

  /// Linear interpolation; throws outside [r_min, r_max].
  double value_at(double r) const;
  /// Linear interpolation, clamped to the end values outside the grid.
  double value_at_clamped(double r) const;
};

/// Positive scalar profile: eps^2 (y'' + y'/r) + mu y - y^3 = 0 with
/// y'(0) = 0 (even extension through the axis) and y(r_max) = 0.
RadialProfile solve_scalar_radial(const ModelParams& p, const RadialGrid& g,
                                  std::vector<double>* newton_trace = nullptr);

/// Degree-1 equivariant amplitude: eps^2 (y'' + y'/r - y/r^2) + mu y - y^3
/// + eps a f = 0 with y(0) = 0 and the outer Dirichlet value pinned to the
/// far-field asymptote -eps a f(r_max)/mu(r_max).
RadialProfile solve_equivariant_radial(
    const ModelParams& p, const RadialGrid& g,
    std::vector<double>* newton_trace = nullptr);

/// Unit-scale vortex profile: eta'' + eta'/r - eta/r^2 + (1 - eta^2) eta = 0
/// with eta(0) = 0 and eta(r_max) = 1 - 1/(2 r_max^2); requires r_max >= 20.
RadialProfile solve_gl_vortex(const RadialGrid& g,
                              std::vector<double>* newton_trace = nullptr);

/// Shared vortex profile on a fixed fine grid, solved once and cached.
const RadialProfile& standard_vortex_profile();

/// Lift a scalar profile to the plane as (y(|x|), 0); boundary ring zeroed.
VectorField2 inject_scalar(const RadialProfile& prof, const GridSpec& g);

/// Lift an equivariant amplitude to the hedgehog y(|x|) x/|x|.
VectorField2 inject_equivariant(const RadialProfile& prof, const GridSpec& g);

/// Pick a radial grid fine enough for the model scales and wide enough to
/// cover the corners of the square grid (|x| up to sqrt(2) L).
RadialGrid default_model_radial_grid(const ModelParams& p, double half_width);

namespace detail {

/// Damped Newton iteration for a tridiagonal two-point problem. `assemble`
/// fills residual F and Jacobian bands (lo, di, up) for the current state.
/// Step halving enforces sup-norm decrease, at most 30 halvings per step;
/// throws std::runtime_error with the residual trace on divergence.
struct TridiagProblem;
void damped_newton(std::vector<double>& y, const TridiagProblem& prob,
                   double tol, int max_iters, std::vector<double>* trace);

/// Rounding floor of an assembled stencil residual whose leading coefficient
/// is `coeff` (typically 1/h^2 scaled) on values of size `y_scale`; solver
/// tolerances below this are unreachable in double precision.
double stencil_floor(double coeff, double y_scale);

struct TridiagProblem {
  void (*assemble)(const void* ctx, const std::vector<double>& y,
                   std::vector<double>& F, std::vector<double>& lo,
                   std::vector<double>& di, std::vector<double>& up);
  const void* ctx;
};

void thomas_solve(std::vector<double>& lo, std::vector<double>& di,
                  std::vector<double>& up, std::vector<double>& rhs);

}  // namespace detail

}  // namespace gln
