#include "gln/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gln/field_io.hpp"
#include "gln/radial.hpp"
#include "model_cache.hpp"

namespace gln {

SeedKind SeedKind::thomas_fermi() { return {}; }

SeedKind SeedKind::radial_scalar() {
  SeedKind s;
  s.tag = Tag::radial_scalar;
  return s;
}

SeedKind SeedKind::vortex(Vec2 center, int degree) {
  if (degree != 1 && degree != -1)
    throw std::invalid_argument("vortex seed degree must be +1 or -1");
  SeedKind s;
  s.tag = Tag::vortex;
  s.center = center;
  s.degree = degree;
  return s;
}

SeedKind SeedKind::random(std::uint64_t rng_seed) {
  SeedKind s;
  s.tag = Tag::random;
  s.rng_seed = rng_seed;
  return s;
}

SeedKind SeedKind::file(std::string path) {
  SeedKind s;
  s.tag = Tag::file;
  s.path = std::move(path);
  return s;
}

SeedKind SeedKind::direct(VectorField2 field) {
  SeedKind s;
  s.tag = Tag::direct;
  s.field = std::make_shared<const VectorField2>(std::move(field));
  return s;
}

SeedKind SeedKind::direct(std::shared_ptr<const VectorField2> field) {
  SeedKind s;
  s.tag = Tag::direct;
  s.field = std::move(field);
  return s;
}

std::string SeedKind::describe() const {
  std::ostringstream os;
  switch (tag) {
    case Tag::thomas_fermi:
      os << "thomas_fermi";
      break;
    case Tag::radial_scalar:
      os << "radial_scalar";
      break;
    case Tag::vortex:
      os << "vortex(" << center.x << ',' << center.y << ','
         << (degree > 0 ? "+1" : "-1") << ')';
      break;
    case Tag::random:
      os << "random(" << rng_seed << ')';
      break;
    case Tag::file:
      os << "file(" << path << ')';
      break;
    case Tag::direct:
      os << "direct";
      break;
  }
  return os.str();
}

namespace {

VectorField2 random_seed_field(const ModelParams& p, const GridSpec& g,
                               std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VectorField2 u = VectorField2::zeros(g);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double env =
          std::sqrt(std::max(0.0, mu_eval(p, g.node(i, j)))) + 0.1;
      u.at1(i, j) = env * dist(rng);
      u.at2(i, j) = env * dist(rng);
    }
  }
  u.zero_boundary();
  // a few averaging sweeps so descent does not start from grid noise
  VectorField2 tmp = u;
  for (int sweep = 0; sweep < 20; ++sweep) {
    for (int i = 1; i + 1 < g.n; ++i) {
      for (int j = 1; j + 1 < g.n; ++j) {
        const std::size_t k = g.idx(i, j);
        tmp.u1[k] = 0.25 * (u.u1[k - 1] + u.u1[k + 1] + u.u1[k - g.n] +
                            u.u1[k + g.n]);
        tmp.u2[k] = 0.25 * (u.u2[k - 1] + u.u2[k + 1] + u.u2[k - g.n] +
                            u.u2[k + g.n]);
      }
    }
    std::swap(u, tmp);
  }
  u.zero_boundary();
  return u;
}

}  // namespace

VectorField2 seed_field(const ModelParams& p, const GridSpec& g,
                        const SeedKind& kind) {
  if (!(g.half_width > p.rho + 1.0))
    throw std::invalid_argument(
        "grid half width must exceed rho + 1 so the interface circle fits "
        "well inside the box");
  switch (kind.tag) {
    case SeedKind::Tag::thomas_fermi: {
      VectorField2 u = VectorField2::zeros(g);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
          u.at1(i, j) = std::sqrt(std::max(0.0, mu_eval(p, g.node(i, j))));
      u.zero_boundary();
      return u;
    }
    case SeedKind::Tag::radial_scalar: {
      const RadialGrid rg = default_model_radial_grid(p, g.half_width);
      return inject_scalar(solve_scalar_radial(p, rg), g);
    }
    case SeedKind::Tag::vortex: {
      VectorField2 u = VectorField2::zeros(g);
      for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
          const Vec2 x = g.node(i, j);
          const Vec2 d = x - kind.center;
          const double r = d.norm();
          if (r == 0.0) continue;
          const double amp = std::sqrt(std::max(0.0, mu_eval(p, x)));
          u.at1(i, j) = amp * d.x / r;
          u.at2(i, j) = amp * kind.degree * d.y / r;
        }
      }
      u.zero_boundary();
      return u;
    }
    case SeedKind::Tag::random:
      return random_seed_field(p, g, kind.rng_seed);
    case SeedKind::Tag::file: {
      VectorField2 u = read_vector_field(kind.path);
      if (!u.grid.same_as(g))
        throw std::runtime_error(
            "seed file grid mismatch (no silent resample): " + kind.path);
      u.zero_boundary();
      return u;
    }
    case SeedKind::Tag::direct: {
      if (!kind.field) throw std::invalid_argument("empty direct seed");
      if (!kind.field->grid.same_as(g))
        throw std::runtime_error("direct seed grid mismatch");
      VectorField2 u = *kind.field;
      u.zero_boundary();
      return u;
    }
  }
  throw std::logic_error("unreachable seed kind");
}

void truncate(VectorField2& u, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("truncation bound must be > 0");
  for (double& v : u.u1) v = std::clamp(v, -bound, bound);
  for (double& v : u.u2) v = std::clamp(v, -bound, bound);
}

double default_truncation_bound(const ModelParams& p) {
  return 1.5 * sup_sqrt_mu_plus(p) + 1.0;
}

double default_amp_tol(const ModelParams& p) {
  return 0.3 * std::cbrt(p.epsilon) * std::sqrt(-p.mu1);
}

namespace {

double dot_plain(const std::vector<double>& a, const std::vector<double>& b) {
  KahanSum acc;
  for (std::size_t k = 0; k < a.size(); ++k) acc.add(a[k] * b[k]);
  return acc.value();
}

struct PairDots {
  double ss = 0.0;
  double sz = 0.0;
};

// s = u - u_prev, z = R - R_prev accumulated without materializing either
PairDots step_dots(const VectorField2& u, const VectorField2& u_prev,
                   const VectorField2& r, const VectorField2& r_prev) {
  KahanSum ss, sz;
  for (std::size_t k = 0; k < u.u1.size(); ++k) {
    const double s1 = u.u1[k] - u_prev.u1[k];
    const double s2 = u.u2[k] - u_prev.u2[k];
    const double z1 = r.u1[k] - r_prev.u1[k];
    const double z2 = r.u2[k] - r_prev.u2[k];
    ss.add(s1 * s1 + s2 * s2);
    sz.add(s1 * z1 + s2 * z2);
  }
  return {ss.value(), sz.value()};
}

}  // namespace

MinimizeResult minimize(const ModelParams& p, VectorField2 start,
                        const MinimizeOptions& opts) {
  if (opts.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(opts.residual_tol > 0.0))
    throw std::invalid_argument("residual_tol must be > 0");
  if (!(start.grid.half_width > p.rho + 1.0))
    throw std::invalid_argument(
        "grid half width must exceed rho + 1 so the interface circle fits "
        "well inside the box");
  start.zero_boundary();
  if (!start.finite()) throw std::domain_error("non-finite field");

  const GridSpec g = start.grid;
  const detail::DiscreteModel model(g, p);
  const double bound = opts.truncation_bound > 0.0 ? opts.truncation_bound
                                                   : default_truncation_bound(p);
  const int trunc_every = opts.truncate_every > 0 ? opts.truncate_every : 50;

  MinimizeResult out;
  out.field = std::move(start);
  VectorField2& u = out.field;
  VectorField2 r = VectorField2::zeros(g);
  VectorField2 u_prev = VectorField2::zeros(g);
  VectorField2 r_prev = VectorField2::zeros(g);
  VectorField2 trial = VectorField2::zeros(g);
  VectorField2 dir = VectorField2::zeros(g);

  model.residual(u, r);
  double energy_now = model.energy(u);
  double res = residual_sup(r);
  out.energy_trace.push_back(energy_now);

  const double h = g.spacing();
  const double q_bound = 3.0 * bound * bound + 1.0;
  const double tau0 =
      1.0 / (8.0 * p.epsilon * p.epsilon / (h * h) + q_bound);
  const double tau_min = 1e-4 * tau0;
  const double tau_max = 1e5 * tau0;

  double tau = tau0;
  bool have_pair = false;
  double cg_gg_prev = 0.0;
  bool have_cg = false;

  int iter = 0;
  for (; iter < opts.max_iters && res > opts.residual_tol; ++iter) {
    // descent direction; gradient of E in node values is -(h^2/eps^2) R
    double dir_dot_r;  // > 0 required for descent
    if (opts.step_rule == StepRule::nonlinear_cg) {
      const double gg = dot_plain(r.u1, r.u1) + dot_plain(r.u2, r.u2);
      if (!have_cg) {
        dir = r;
      } else {
        KahanSum num;
        for (std::size_t k = 0; k < r.u1.size(); ++k) {
          num.add(r.u1[k] * (r.u1[k] - r_prev.u1[k]));
          num.add(r.u2[k] * (r.u2[k] - r_prev.u2[k]));
        }
        const double beta = std::max(0.0, num.value() / cg_gg_prev);
        for (std::size_t k = 0; k < dir.u1.size(); ++k) {
          dir.u1[k] = r.u1[k] + beta * dir.u1[k];
          dir.u2[k] = r.u2[k] + beta * dir.u2[k];
        }
      }
      cg_gg_prev = gg;
      have_cg = true;
      dir_dot_r = dot_plain(dir.u1, r.u1) + dot_plain(dir.u2, r.u2);
      if (!(dir_dot_r > 0.0)) {  // restart on a non-descent direction
        dir = r;
        dir_dot_r = gg;
      }
    } else {
      dir = r;
      dir_dot_r = dot_plain(r.u1, r.u1) + dot_plain(r.u2, r.u2);
    }

    if (opts.step_rule == StepRule::adaptive_bb && have_pair) {
      const PairDots d = step_dots(u, u_prev, r, r_prev);
      if (d.sz < 0.0 && d.ss > 0.0)
        tau = std::clamp(-d.ss / d.sz, tau_min, tau_max);
      else
        tau = std::clamp(2.0 * tau, tau_min, tau_max);
    } else if (opts.step_rule == StepRule::fixed) {
      tau = opts.fixed_step > 0.0 ? opts.fixed_step : tau0;
    } else if (opts.step_rule == StepRule::nonlinear_cg) {
      tau = std::clamp(1.5 * tau, tau_min, tau_max);
    }

    // backtracking keeps the energy trace monotone
    bool accepted = false;
    double trial_energy = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t k = 0; k < u.u1.size(); ++k) {
        trial.u1[k] = u.u1[k] + tau * dir.u1[k];
        trial.u2[k] = u.u2[k] + tau * dir.u2[k];
      }
      trial_energy = model.energy(trial);
      if (std::isfinite(trial_energy) && trial_energy <= energy_now) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;  // no descent step left at this precision

    u_prev = u;
    r_prev = r;
    std::swap(u, trial);
    energy_now = trial_energy;
    have_pair = true;

    if ((iter + 1) % trunc_every == 0) {
      VectorField2 clipped = u;
      truncate(clipped, bound);
      const double clipped_energy = model.energy(clipped);
      if (clipped_energy <= energy_now) {
        u = std::move(clipped);
        energy_now = clipped_energy;
        have_pair = false;  // projection invalidates the BB pair
        have_cg = false;
      }
    }

    model.residual(u, r);
    res = residual_sup(r);
    out.energy_trace.push_back(energy_now);
  }

  out.energy = energy_now;
  out.residual_sup = res;
  out.iters = iter;
  out.converged = res <= opts.residual_tol;
  if (p.a == 0.0) apply_phase_gauge(u);
  return out;
}

MinimizeResult minimize_from_seed(const ModelParams& p, const GridSpec& g,
                                  const SeedKind& seed,
                                  const MinimizeOptions& opts) {
  return minimize(p, seed_field(p, g, seed), opts);
}

MultistartResult multistart_global(const ModelParams& p, const GridSpec& g,
                                   const MinimizeOptions& opts,
                                   const std::vector<SeedKind>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("multistart needs seeds");
  MultistartResult out;
  bool have_best = false;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    MinimizeResult res = minimize_from_seed(p, g, seeds[s], opts);
    SeedOutcome rec;
    rec.kind = seeds[s];
    rec.energy = res.energy;
    rec.residual_sup = res.residual_sup;
    rec.iters = res.iters;
    rec.converged = res.converged;
    out.outcomes.push_back(rec);
    if (res.converged && (!have_best || res.energy < out.best.energy)) {
      out.best = std::move(res);
      out.best_index = s;
      have_best = true;
    }
  }
  if (!have_best) {
    std::ostringstream msg;
    msg << "no seed converged;";
    for (const auto& rec : out.outcomes)
      msg << ' ' << rec.kind.describe() << ": residual " << rec.residual_sup
          << " after " << rec.iters << " iters;";
    throw std::runtime_error(msg.str());
  }
  return out;
}

void apply_phase_gauge(VectorField2& u) {
  KahanSum sx, sy;
  for (std::size_t k = 0; k < u.u1.size(); ++k) {
    sx.add(u.u1[k]);
    sy.add(u.u2[k]);
  }
  const double mx = sx.value(), my = sy.value();
  const double norm = std::hypot(mx, my);
  if (norm < 1e-12 * u.u1.size()) return;  // no usable mean direction
  const double c = mx / norm, s = my / norm;
  for (std::size_t k = 0; k < u.u1.size(); ++k) {
    const double a1 = u.u1[k], a2 = u.u2[k];
    u.u1[k] = c * a1 + s * a2;
    u.u2[k] = -s * a1 + c * a2;
  }
}

EnergyDifference energy_difference_check(const VectorField2& u,
                                         const VectorField2& psi,
                                         const ModelParams& p) {
  if (!u.grid.same_as(psi.grid))
    throw std::invalid_argument("energy_difference_check: grid mismatch");
  VectorField2 sum = u;
  for (std::size_t k = 0; k < sum.u1.size(); ++k) {
    sum.u1[k] += psi.u1[k];
    sum.u2[k] += psi.u2[k];
  }
  EnergyDifference d;
  d.actual = energy(sum, p) - energy(u, p);
  d.predicted = energy_difference_predicted(u, psi, p);
  return d;
}

}  // namespace gln
