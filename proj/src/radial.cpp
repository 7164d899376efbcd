#include "gln/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gln {

RadialGrid RadialGrid::make(double r_min, double r_max, int m) {
  if (!(r_max > r_min)) throw std::invalid_argument("grid needs r_max > r_min");
  if (m < 16) throw std::invalid_argument("grid needs m >= 16");
  return {r_min, r_max, m};
}

double RadialProfile::value_at(double r) const {
  const double slack = 1e-9 * (grid.r_max - grid.r_min);
  if (r < grid.r_min - slack || r > grid.r_max + slack)
    throw std::invalid_argument("profile evaluated outside its grid");
  return value_at_clamped(r);
}

double RadialProfile::value_at_clamped(double r) const {
  const double h = grid.spacing();
  double t = (r - grid.r_min) / h;
  t = std::clamp(t, 0.0, double(grid.m - 1));
  const int i = std::min(int(t), grid.m - 2);
  const double w = t - i;
  return (1.0 - w) * values[i] + w * values[i + 1];
}

namespace detail {

void thomas_solve(std::vector<double>& lo, std::vector<double>& di,
                  std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t m = di.size();
  for (std::size_t i = 1; i < m; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[m - 1] /= di[m - 1];
  for (std::size_t i = m - 1; i-- > 0;)
    rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

namespace {
double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    if (!std::isfinite(x))
      return std::numeric_limits<double>::infinity();
    s = std::max(s, std::abs(x));
  }
  return s;
}
}  // namespace

double stencil_floor(double coeff, double y_scale) {
  return 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + y_scale) *
         (1.0 + coeff);
}

void damped_newton(std::vector<double>& y, const TridiagProblem& prob,
                   double tol, int max_iters, std::vector<double>* trace) {
  const std::size_t m = y.size();
  std::vector<double> F(m), lo(m), di(m), up(m), trial(m);
  std::vector<double> local_trace;
  std::vector<double>& tr = trace ? *trace : local_trace;
  tr.clear();

  prob.assemble(prob.ctx, y, F, lo, di, up);
  double res = sup_norm(F);
  tr.push_back(res);

  for (int iter = 0; iter < max_iters; ++iter) {
    if (res <= tol) return;
    std::vector<double> l = lo, d = di, u = up, rhs = F;
    for (double& v : rhs) v = -v;
    thomas_solve(l, d, u, rhs);  // rhs becomes the Newton step

    double t = 1.0;
    bool accepted = false;
    for (int halve = 0; halve <= 30; ++halve) {
      for (std::size_t k = 0; k < m; ++k) trial[k] = y[k] + t * rhs[k];
      prob.assemble(prob.ctx, trial, F, lo, di, up);
      const double res_trial = sup_norm(F);
      if (std::isfinite(res_trial) && res_trial < res) {
        y = trial;
        res = res_trial;
        tr.push_back(res);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "Newton divergence after " << iter + 1
          << " steps; residual trace:";
      for (double v : tr) msg << ' ' << v;
      throw std::runtime_error(msg.str());
    }
  }
  if (res > tol) {
    std::ostringstream msg;
    msg << "Newton did not reach tolerance " << tol << "; residual trace:";
    for (double v : tr) msg << ' ' << v;
    throw std::runtime_error(msg.str());
  }
}

}  // namespace detail

namespace {

struct ModelOdeCtx {
  const ModelParams* p;
  const RadialGrid* g;
  bool equivariant;  // adds -eps^2 y/r^2 and the eps a f forcing
  double right_bc;
};

// Scalar case keeps y'(0) = 0 through an even ghost node; the radial
// Laplacian limit at the axis is 2 y''(0).
void assemble_model(const void* vctx, const std::vector<double>& y,
                    std::vector<double>& F, std::vector<double>& lo,
                    std::vector<double>& di, std::vector<double>& up) {
  const auto& ctx = *static_cast<const ModelOdeCtx*>(vctx);
  const ModelParams& p = *ctx.p;
  const RadialGrid& g = *ctx.g;
  const int m = g.m;
  const double h = g.spacing();
  const double e2 = p.epsilon * p.epsilon;

  if (ctx.equivariant) {
    F[0] = y[0];
    di[0] = 1.0;
    up[0] = 0.0;
    lo[0] = 0.0;
  } else {
    F[0] = e2 * 4.0 * (y[1] - y[0]) / (h * h) + p.mu_rad(0.0) * y[0] -
           y[0] * y[0] * y[0];
    di[0] = -4.0 * e2 / (h * h) + p.mu_rad(0.0) - 3.0 * y[0] * y[0];
    up[0] = 4.0 * e2 / (h * h);
    lo[0] = 0.0;
  }

  for (int i = 1; i + 1 < m; ++i) {
    const double r = g.r(i);
    const double mu = p.mu_rad(r);
    const double cpp = e2 / (h * h);
    const double cp = e2 / (2.0 * h * r);
    const double c0 = ctx.equivariant ? -e2 / (r * r) : 0.0;
    const double force =
        ctx.equivariant ? p.epsilon * p.a * p.f_rad(r) : 0.0;
    F[i] = cpp * (y[i + 1] - 2.0 * y[i] + y[i - 1]) +
           cp * (y[i + 1] - y[i - 1]) + (mu + c0) * y[i] -
           y[i] * y[i] * y[i] + force;
    lo[i] = cpp - cp;
    di[i] = -2.0 * cpp + mu + c0 - 3.0 * y[i] * y[i];
    up[i] = cpp + cp;
  }

  F[m - 1] = y[m - 1] - ctx.right_bc;
  lo[m - 1] = 0.0;
  di[m - 1] = 1.0;
  up[m - 1] = 0.0;
}

void assemble_gl(const void* vctx, const std::vector<double>& y,
                 std::vector<double>& F, std::vector<double>& lo,
                 std::vector<double>& di, std::vector<double>& up) {
  const auto& ctx = *static_cast<const ModelOdeCtx*>(vctx);
  const RadialGrid& g = *ctx.g;
  const int m = g.m;
  const double h = g.spacing();

  F[0] = y[0];
  di[0] = 1.0;
  up[0] = lo[0] = 0.0;
  for (int i = 1; i + 1 < m; ++i) {
    const double r = g.r(i);
    const double cpp = 1.0 / (h * h);
    const double cp = 1.0 / (2.0 * h * r);
    F[i] = cpp * (y[i + 1] - 2.0 * y[i] + y[i - 1]) +
           cp * (y[i + 1] - y[i - 1]) - y[i] / (r * r) +
           (1.0 - y[i] * y[i]) * y[i];
    lo[i] = cpp - cp;
    di[i] = -2.0 * cpp - 1.0 / (r * r) + 1.0 - 3.0 * y[i] * y[i];
    up[i] = cpp + cp;
  }
  F[m - 1] = y[m - 1] - ctx.right_bc;
  lo[m - 1] = 0.0;
  di[m - 1] = 1.0;
  up[m - 1] = 0.0;
}

// Solvers floor this by detail::stencil_floor so fine grids do not chase a
// residual below the rounding level of the second-difference stencil.
constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonIters = 200;

}  // namespace

RadialProfile solve_scalar_radial(const ModelParams& p, const RadialGrid& g,
                                  std::vector<double>* newton_trace) {
  if (g.r_min != 0.0)
    throw std::invalid_argument("radial profile grid must start at r = 0");
  if (g.r_max < p.rho + 3.0)
    throw std::invalid_argument("radial profile grid needs r_max >= rho + 3");
  ModelOdeCtx ctx{&p, &g, false, 0.0};
  std::vector<double> y(g.m);
  for (int i = 0; i < g.m; ++i)
    y[i] = std::sqrt(std::max(0.0, p.mu_rad(g.r(i))));
  y[g.m - 1] = 0.0;
  const double h = g.spacing();
  const double tol = std::max(
      kNewtonTol, detail::stencil_floor(
                      4.0 * p.epsilon * p.epsilon / (h * h),
                      detail::sup_norm(y)));
  detail::damped_newton(y, {assemble_model, &ctx}, tol, kNewtonIters,
                        newton_trace);
  return {g, std::move(y), ProfileKind::scalar};
}

RadialProfile solve_equivariant_radial(const ModelParams& p,
                                       const RadialGrid& g,
                                       std::vector<double>* newton_trace) {
  if (g.r_min != 0.0)
    throw std::invalid_argument("radial profile grid must start at r = 0");
  if (g.r_max < p.rho + 3.0)
    throw std::invalid_argument("radial profile grid needs r_max >= rho + 3");
  const double mu_out = p.mu_rad(g.r_max);
  if (!(mu_out < 0.0))
    throw std::invalid_argument("outer radius must lie beyond the interface");
  ModelOdeCtx ctx{&p, &g, true,
                  -p.epsilon * p.a * p.f_rad(g.r_max) / mu_out};
  const double core = p.epsilon / std::sqrt(1.0 - p.chi);
  std::vector<double> y(g.m);
  for (int i = 0; i < g.m; ++i) {
    const double r = g.r(i);
    const double amp = std::sqrt(std::max(0.0, p.mu_rad(r)));
    const double t = r / core;
    double v = amp * t / std::sqrt(t * t + 2.0);
    const double mu = p.mu_rad(r);
    if (mu < -0.05) v += -p.epsilon * p.a * p.f_rad(r) / mu;
    y[i] = v;
  }
  y[0] = 0.0;
  y[g.m - 1] = ctx.right_bc;
  const double h = g.spacing();
  const double tol = std::max(
      kNewtonTol, detail::stencil_floor(
                      4.0 * p.epsilon * p.epsilon / (h * h),
                      detail::sup_norm(y)));
  detail::damped_newton(y, {assemble_model, &ctx}, tol, kNewtonIters,
                        newton_trace);
  return {g, std::move(y), ProfileKind::equivariant};
}

RadialProfile solve_gl_vortex(const RadialGrid& g,
                              std::vector<double>* newton_trace) {
  if (g.r_min != 0.0)
    throw std::invalid_argument("vortex profile grid must start at r = 0");
  if (g.r_max < 20.0)
    throw std::invalid_argument("vortex profile grid needs r_max >= 20");
  ModelOdeCtx ctx{nullptr, &g, false,
                  1.0 - 1.0 / (2.0 * g.r_max * g.r_max)};
  std::vector<double> y(g.m);
  for (int i = 0; i < g.m; ++i) {
    const double r = g.r(i);
    y[i] = r / std::sqrt(r * r + 2.0);
  }
  y[g.m - 1] = ctx.right_bc;
  const double h = g.spacing();
  const double tol = std::max(
      kNewtonTol,
      detail::stencil_floor(1.0 / (h * h), detail::sup_norm(y)));
  detail::damped_newton(y, {assemble_gl, &ctx}, tol, kNewtonIters,
                        newton_trace);
  return {g, std::move(y), ProfileKind::gl_vortex};
}

const RadialProfile& standard_vortex_profile() {
  static const RadialProfile prof =
      solve_gl_vortex(RadialGrid::radial(24.0, 9601));
  return prof;
}

VectorField2 inject_scalar(const RadialProfile& prof, const GridSpec& g) {
  VectorField2 out = VectorField2::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      out.at1(i, j) = prof.value_at_clamped(g.node(i, j).norm());
    }
  }
  out.zero_boundary();
  return out;
}

VectorField2 inject_equivariant(const RadialProfile& prof, const GridSpec& g) {
  VectorField2 out = VectorField2::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Vec2 x = g.node(i, j);
      const double r = x.norm();
      if (r == 0.0) continue;
      const double y = prof.value_at_clamped(r);
      out.at1(i, j) = y * x.x / r;
      out.at2(i, j) = y * x.y / r;
    }
  }
  out.zero_boundary();
  return out;
}

RadialGrid default_model_radial_grid(const ModelParams& p,
                                     double half_width) {
  const double r_max =
      std::max(p.rho + 3.0, std::sqrt(2.0) * half_width + 0.1);
  const double target_h = std::min(0.01, p.epsilon / 5.0);
  int m = int(std::ceil(r_max / target_h)) + 1;
  m = std::clamp(m, 2049, 65537);
  return RadialGrid::radial(r_max, m);
}

}  // namespace gln
