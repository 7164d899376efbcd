#include "gln/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gln/energy.hpp"

namespace gln {

PainleveSpec PainleveSpec::make(double alpha, P2Branch branch, double S,
                                int m) {
  if (!(S >= 8.0)) throw std::invalid_argument("layer problem needs S >= 8");
  if (m < 400) throw std::invalid_argument("layer problem needs m >= 400");
  if (!std::isfinite(alpha)) throw std::invalid_argument("non-finite alpha");
  return {alpha, branch, S, m};
}

double p2_right_boundary_value(double S, double alpha) {
  if (alpha == 0.0) return 0.0;
  // monotone cubic (3y^2 + S/2 > 0): Newton from the linearized root
  double y = -alpha / S;
  for (int it = 0; it < 100; ++it) {
    const double g = y * y * y + 0.5 * S * y + 0.5 * alpha;
    const double dg = 3.0 * y * y + 0.5 * S;
    const double step = g / dg;
    y -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(y))) break;
  }
  return y;
}

namespace {

struct P2Ctx {
  const PainleveSpec* spec;
  double left_bc, right_bc;
  double h;
};

void assemble_p2(const void* vctx, const std::vector<double>& y,
                 std::vector<double>& F, std::vector<double>& lo,
                 std::vector<double>& di, std::vector<double>& up) {
  const auto& ctx = *static_cast<const P2Ctx*>(vctx);
  const int m = ctx.spec->m;
  const double h = ctx.h, S = ctx.spec->S, alpha = ctx.spec->alpha;
  F[0] = y[0] - ctx.left_bc;
  lo[0] = 0.0;
  di[0] = 1.0;
  up[0] = 0.0;
  for (int i = 1; i + 1 < m; ++i) {
    const double s = -S + i * h;
    F[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h) - s * y[i] -
           2.0 * y[i] * y[i] * y[i] - alpha;
    lo[i] = 1.0 / (h * h);
    di[i] = -2.0 / (h * h) - s - 6.0 * y[i] * y[i];
    up[i] = 1.0 / (h * h);
  }
  F[m - 1] = y[m - 1] - ctx.right_bc;
  lo[m - 1] = 0.0;
  di[m - 1] = 1.0;
  up[m - 1] = 0.0;
}

std::vector<double> p2_initial_guess(const PainleveSpec& spec,
                                     double right_bc) {
  const int m = spec.m;
  const double h = 2.0 * spec.S / (m - 1);
  std::vector<double> y(m);
  for (int i = 0; i < m; ++i) {
    const double s = -spec.S + i * h;
    double v;
    if (s <= 0.0) {
      v = std::sqrt(-0.5 * s);
    } else {
      v = right_bc + (0.35 - right_bc) * std::exp(-1.2 * s);
    }
    // the sign-changing branch hugs the negative parabola on the left and
    // crosses once near the junction; a tanh switch against the positive
    // profile shape puts Newton in that basin
    if (spec.branch == P2Branch::minus) v *= std::tanh((s + 1.0) / 0.7);
    y[i] = v;
  }
  return y;
}

int count_sign_changes(const std::vector<double>& y, double filter) {
  int flips = 0;
  double prev = 0.0;
  for (double v : y) {
    if (std::abs(v) <= filter) continue;
    if (prev != 0.0 && v * prev < 0.0) ++flips;
    prev = v;
  }
  return flips;
}

}  // namespace

RadialProfile solve_p2(const PainleveSpec& spec,
                       std::vector<double>* newton_trace) {
  const double h = 2.0 * spec.S / (spec.m - 1);
  const double sgn = spec.branch == P2Branch::plus ? 1.0 : -1.0;
  P2Ctx ctx{&spec, sgn * std::sqrt(0.5 * spec.S),
            p2_right_boundary_value(spec.S, spec.alpha), h};
  std::vector<double> y = p2_initial_guess(spec, ctx.right_bc);
  double y_scale = 0.0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  const double tol =
      std::max(1e-10, detail::stencil_floor(1.0 / (h * h), y_scale));
  detail::damped_newton(y, {assemble_p2, &ctx}, tol, 300, newton_trace);
  if (spec.branch == P2Branch::minus && count_sign_changes(y, 1e-8) != 1) {
    // the one-node profile exists only on a window of negative alpha; as
    // alpha -> 0 its crossing escapes to +infinity and Newton lands on the
    // nodeless negative solution instead
    throw std::runtime_error(
        "solve_p2: no sign-changing profile at alpha=" +
        std::to_string(spec.alpha) +
        "; the minus branch requires negative forcing above the fold");
  }
  RadialProfile prof{RadialGrid::make(-spec.S, spec.S, spec.m), std::move(y),
                     ProfileKind::painleve};
  return prof;
}

namespace {

void fill_strip_boundary(StripField& u, const StripField& bc_source) {
  const int m1 = u.m1, m2 = u.m2;
  for (int j = 0; j < m1; ++j) {
    u.u1[u.idx(0, j)] = bc_source.u1[bc_source.idx(0, j)];
    u.u2[u.idx(0, j)] = bc_source.u2[bc_source.idx(0, j)];
    u.u1[u.idx(m2 - 1, j)] = bc_source.u1[bc_source.idx(m2 - 1, j)];
    u.u2[u.idx(m2 - 1, j)] = bc_source.u2[bc_source.idx(m2 - 1, j)];
  }
  for (int i = 0; i < m2; ++i) {
    u.u1[u.idx(i, 0)] = bc_source.u1[bc_source.idx(i, 0)];
    u.u2[u.idx(i, 0)] = bc_source.u2[bc_source.idx(i, 0)];
    u.u1[u.idx(i, m1 - 1)] = bc_source.u1[bc_source.idx(i, m1 - 1)];
    u.u2[u.idx(i, m1 - 1)] = bc_source.u2[bc_source.idx(i, m1 - 1)];
  }
}

void strip_residual(const StripField& u, double alpha, StripField& r) {
  const int m1 = u.m1, m2 = u.m2;
  const double h1 = u.h1(), h2 = u.h2();
  const double ih1 = 1.0 / (h1 * h1), ih2 = 1.0 / (h2 * h2);
  std::fill(r.u1.begin(), r.u1.end(), 0.0);
  std::fill(r.u2.begin(), r.u2.end(), 0.0);
  for (int i = 1; i + 1 < m2; ++i) {
    for (int j = 1; j + 1 < m1; ++j) {
      const std::size_t k = u.idx(i, j);
      const double a1 = u.u1[k], a2 = u.u2[k];
      const double m2n = a1 * a1 + a2 * a2;
      const double s1 = u.s1(j);
      const double lap1 = ih1 * (u.u1[k - 1] - 2 * a1 + u.u1[k + 1]) +
                          ih2 * (u.u1[k - m1] - 2 * a1 + u.u1[k + m1]);
      const double lap2 = ih1 * (u.u2[k - 1] - 2 * a2 + u.u2[k + 1]) +
                          ih2 * (u.u2[k - m1] - 2 * a2 + u.u2[k + m1]);
      r.u1[k] = lap1 - s1 * a1 - 2.0 * m2n * a1 - alpha;
      r.u2[k] = lap2 - s1 * a2 - 2.0 * m2n * a2;
    }
  }
}

double strip_residual_sup(const StripField& r) {
  double m = 0.0;
  for (double v : r.u1) m = std::max(m, std::abs(v));
  for (double v : r.u2) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double strip_energy(const StripField& u, double alpha) {
  const int m1 = u.m1, m2 = u.m2;
  const double h1 = u.h1(), h2 = u.h2();
  KahanSum grad, pot;
  for (int i = 0; i < m2; ++i) {
    for (int j = 0; j < m1; ++j) {
      const std::size_t k = u.idx(i, j);
      if (j + 1 < m1) {
        const double d1 = u.u1[k + 1] - u.u1[k];
        const double d2 = u.u2[k + 1] - u.u2[k];
        grad.add((d1 * d1 + d2 * d2) * (h2 / h1));
      }
      if (i + 1 < m2) {
        const double d1 = u.u1[k + m1] - u.u1[k];
        const double d2 = u.u2[k + m1] - u.u2[k];
        grad.add((d1 * d1 + d2 * d2) * (h1 / h2));
      }
      const double a1 = u.u1[k], a2 = u.u2[k];
      const double m2n = a1 * a1 + a2 * a2;
      pot.add(0.5 * u.s1(j) * m2n + 0.5 * m2n * m2n + alpha * a1);
    }
  }
  return 0.5 * grad.value() + h1 * h2 * pot.value();
}

std::vector<double> strip_reference_profile(double alpha, P2Branch branch,
                                            const StripRect& rect, int m1) {
  // fine global solve pins the endpoint values
  const double S_big =
      std::max({8.0, std::abs(rect.s1_min), std::abs(rect.s1_max)}) + 2.0;
  const int m_big = std::max(4001, int(S_big * 1000) | 1);
  const RadialProfile global =
      solve_p2(PainleveSpec::make(alpha, branch, S_big, m_big));

  // then a Newton solve on exactly the strip's s1 nodes
  const double h1 = (rect.s1_max - rect.s1_min) / (m1 - 1);
  struct Ctx {
    double s1_min, h, alpha, left_bc, right_bc;
    int m;
  } ctx{rect.s1_min, h1, alpha, global.value_at(rect.s1_min),
        global.value_at(rect.s1_max), m1};
  auto assemble = [](const void* vctx, const std::vector<double>& y,
                     std::vector<double>& F, std::vector<double>& lo,
                     std::vector<double>& di, std::vector<double>& up) {
    const auto& c = *static_cast<const Ctx*>(vctx);
    F[0] = y[0] - c.left_bc;
    lo[0] = 0.0;
    di[0] = 1.0;
    up[0] = 0.0;
    for (int i = 1; i + 1 < c.m; ++i) {
      const double s = c.s1_min + i * c.h;
      F[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (c.h * c.h) - s * y[i] -
             2.0 * y[i] * y[i] * y[i] - c.alpha;
      lo[i] = 1.0 / (c.h * c.h);
      di[i] = -2.0 / (c.h * c.h) - s - 6.0 * y[i] * y[i];
      up[i] = 1.0 / (c.h * c.h);
    }
    F[c.m - 1] = y[c.m - 1] - c.right_bc;
    lo[c.m - 1] = 0.0;
    di[c.m - 1] = 1.0;
    up[c.m - 1] = 0.0;
  };
  std::vector<double> y(m1);
  double y_scale = 0.0;
  for (int j = 0; j < m1; ++j) {
    y[j] = global.value_at(rect.s1_min + j * h1);
    y_scale = std::max(y_scale, std::abs(y[j]));
  }
  const double tol =
      std::max(1e-10, detail::stencil_floor(1.0 / (h1 * h1), y_scale));
  detail::damped_newton(y, {assemble, &ctx}, tol, 200, nullptr);
  return y;
}

StripResult minimize_p2_strip(double alpha, P2Branch branch,
                              const StripRect& rect, int m1, int m2,
                              StripBC bc, const StripField* custom_bc,
                              const StripOptions& opts) {
  if (!(rect.s1_max > rect.s1_min) || !(rect.s2_max > rect.s2_min))
    throw std::invalid_argument("strip rectangle is degenerate");
  if (m1 < 16 || m2 < 16)
    throw std::invalid_argument("strip grid needs m1, m2 >= 16");

  StripField u;
  u.rect = rect;
  u.m1 = m1;
  u.m2 = m2;
  u.u1.assign(std::size_t(m1) * m2, 0.0);
  u.u2.assign(std::size_t(m1) * m2, 0.0);

  if (bc == StripBC::custom) {
    if (!custom_bc || custom_bc->m1 != m1 || custom_bc->m2 != m2)
      throw std::invalid_argument("custom strip BC grid mismatch");
    fill_strip_boundary(u, *custom_bc);
    // harmonic-free start: linear blend of the boundary rows
    for (int i = 1; i + 1 < m2; ++i) {
      const double t = double(i) / (m2 - 1);
      for (int j = 1; j + 1 < m1; ++j) {
        u.u1[u.idx(i, j)] = (1 - t) * u.u1[u.idx(0, j)] + t * u.u1[u.idx(m2 - 1, j)];
        u.u2[u.idx(i, j)] = (1 - t) * u.u2[u.idx(0, j)] + t * u.u2[u.idx(m2 - 1, j)];
      }
    }
  } else {
    const std::vector<double> ref =
        strip_reference_profile(alpha, branch, rect, m1);
    for (int i = 0; i < m2; ++i)
      for (int j = 0; j < m1; ++j) u.u1[u.idx(i, j)] = ref[j];
  }

  StripResult out;
  StripField r = u, r_prev = u, u_prev = u, trial = u;
  std::fill(r.u1.begin(), r.u1.end(), 0.0);
  std::fill(r.u2.begin(), r.u2.end(), 0.0);

  strip_residual(u, alpha, r);
  double res = strip_residual_sup(r);
  double energy_now = strip_energy(u, alpha);
  out.energy_trace.push_back(energy_now);

  const double h1 = u.h1(), h2 = u.h2();
  const double smax = std::max(std::abs(rect.s1_min), std::abs(rect.s1_max));
  double ymax = 0.0;
  for (double v : u.u1) ymax = std::max(ymax, std::abs(v));
  const double q = smax + 6.0 * std::max(1.0, ymax * ymax) + std::abs(alpha);
  const double tau0 = 1.0 / (4.0 / (h1 * h1) + 4.0 / (h2 * h2) + q);
  double tau = tau0;
  bool have_pair = false;

  int iter = 0;
  for (; iter < opts.max_iters && res > opts.residual_tol; ++iter) {
    if (have_pair) {
      KahanSum ss, sz;
      for (std::size_t k = 0; k < u.u1.size(); ++k) {
        const double s1 = u.u1[k] - u_prev.u1[k];
        const double s2 = u.u2[k] - u_prev.u2[k];
        ss.add(s1 * s1 + s2 * s2);
        sz.add(s1 * (r.u1[k] - r_prev.u1[k]) + s2 * (r.u2[k] - r_prev.u2[k]));
      }
      if (sz.value() < 0.0 && ss.value() > 0.0)
        tau = std::clamp(-ss.value() / sz.value(), 1e-4 * tau0, 1e5 * tau0);
      else
        tau = std::clamp(2.0 * tau, 1e-4 * tau0, 1e5 * tau0);
    }
    bool accepted = false;
    double trial_energy = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t k = 0; k < u.u1.size(); ++k) {
        trial.u1[k] = u.u1[k] + tau * r.u1[k];
        trial.u2[k] = u.u2[k] + tau * r.u2[k];
      }
      trial_energy = strip_energy(trial, alpha);
      if (std::isfinite(trial_energy) && trial_energy <= energy_now) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;
    u_prev = u;
    r_prev = r;
    std::swap(u, trial);
    energy_now = trial_energy;
    have_pair = true;
    strip_residual(u, alpha, r);
    res = strip_residual_sup(r);
    out.energy_trace.push_back(energy_now);
  }

  out.field = std::move(u);
  out.energy = energy_now;
  out.residual_sup = res;
  out.iters = iter;
  out.converged = res <= opts.residual_tol;
  return out;
}

LayerWindow extract_layer(const VectorField2& v, const ModelParams& p,
                          double theta, const StripRect& rect, int m1,
                          int m2) {
  if (m1 < 2 || m2 < 2)
    throw std::invalid_argument("layer window needs m1, m2 >= 2");
  const double scale =
      std::cbrt(p.epsilon * p.epsilon) / std::cbrt(-p.mu1);  // eps^{2/3}/(-mu1)^{1/3}
  const double amp = 1.0 / (std::sqrt(2.0) * std::cbrt(-p.mu1 * p.epsilon));
  const Vec2 er{std::cos(theta), std::sin(theta)};
  const Vec2 et{-er.y, er.x};
  const Vec2 xi = p.rho * er;

  const double L = v.grid.half_width;
  for (double s1 : {rect.s1_min, rect.s1_max}) {
    for (double s2 : {rect.s2_min, rect.s2_max}) {
      const Vec2 x = xi + scale * (s1 * er + s2 * et);
      if (std::abs(x.x) > L || std::abs(x.y) > L) {
        std::ostringstream msg;
        msg << "layer window corner (s1, s2) = (" << s1 << ", " << s2
            << ") maps to (x, y) = (" << x.x << ", " << x.y
            << ") outside the grid";
        throw std::invalid_argument(msg.str());
      }
    }
  }

  LayerWindow w;
  w.theta = theta;
  w.rect = rect;
  w.m1 = m1;
  w.m2 = m2;
  w.w1.assign(std::size_t(m1) * m2, 0.0);
  w.w2.assign(std::size_t(m1) * m2, 0.0);
  for (int i = 0; i < m2; ++i) {
    const double s2 = rect.s2_min + i * (rect.s2_max - rect.s2_min) / (m2 - 1);
    for (int j = 0; j < m1; ++j) {
      const double s1 =
          rect.s1_min + j * (rect.s1_max - rect.s1_min) / (m1 - 1);
      const Vec2 x = xi + scale * (s1 * er + s2 * et);
      const Vec2 val = v.sample(x);
      w.w1[w.idx(i, j)] = amp * dot(val, er);
      w.w2[w.idx(i, j)] = amp * dot(val, et);
    }
  }
  return w;
}

}  // namespace gln
