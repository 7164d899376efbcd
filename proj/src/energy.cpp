#include "gln/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "model_cache.hpp"

namespace gln {

double energy(const VectorField2& u, const ModelParams& p) {
  return detail::DiscreteModel(u.grid, p).energy(u);
}

VectorField2 el_residual(const VectorField2& u, const ModelParams& p) {
  VectorField2 r = VectorField2::zeros(u.grid);
  detail::DiscreteModel(u.grid, p).residual(u, r);
  return r;
}

double residual_sup(const VectorField2& r) {
  double m = 0.0;
  for (double v : r.u1) m = std::max(m, std::abs(v));
  for (double v : r.u2) m = std::max(m, std::abs(v));
  return m;
}

double renormalized_energy(const VectorField2& u, const ModelParams& p) {
  const GridSpec& g = u.grid;
  const double h = g.spacing();
  const double inv_4eps2 = 0.25 / (p.epsilon * p.epsilon);
  KahanSum acc;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Vec2 x = g.node(i, j);
      if (x.norm_sq() < p.rho * p.rho) {
        const double mu = mu_eval(p, x);
        acc.add(mu * mu);
      }
    }
  }
  return energy(u, p) + h * h * inv_4eps2 * acc.value();
}

double field_dot(const VectorField2& a, const VectorField2& b) {
  if (!a.grid.same_as(b.grid))
    throw std::invalid_argument("field_dot: grid mismatch");
  const double h = a.grid.spacing();
  KahanSum acc;
  for (std::size_t k = 0; k < a.u1.size(); ++k)
    acc.add(a.u1[k] * b.u1[k] + a.u2[k] * b.u2[k]);
  return h * h * acc.value();
}

double field_norm1(const VectorField2& u) {
  const double h = u.grid.spacing();
  KahanSum acc;
  for (std::size_t k = 0; k < u.u1.size(); ++k)
    acc.add(std::abs(u.u1[k]) + std::abs(u.u2[k]));
  return h * h * acc.value();
}

double energy_gradient_pairing(const VectorField2& u, const VectorField2& psi,
                               const ModelParams& p) {
  VectorField2 r = el_residual(u, p);
  return -field_dot(r, psi) / (p.epsilon * p.epsilon);
}

double energy_difference_predicted(const VectorField2& u,
                                   const VectorField2& psi,
                                   const ModelParams& p) {
  if (!u.finite() || !psi.finite())
    throw std::domain_error("non-finite field");
  if (!u.grid.same_as(psi.grid))
    throw std::invalid_argument("energy_difference_predicted: grid mismatch");
  const GridSpec& g = u.grid;
  const double h = g.spacing();
  const double inv_eps2 = 1.0 / (p.epsilon * p.epsilon);

  KahanSum pot;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const std::size_t k = g.idx(i, j);
      const double p1 = psi.u1[k], p2 = psi.u2[k];
      const double ps = p1 * p1 + p2 * p2;
      if (ps == 0.0) continue;
      const double a1 = u.u1[k], a2 = u.u2[k];
      const double m2 = a1 * a1 + a2 * a2;
      const double mu = mu_eval(p, g.node(i, j));
      const double w = ps + 2.0 * (a1 * p1 + a2 * p2);
      pot.add(0.5 * (m2 - mu) * ps * inv_eps2 + 0.25 * w * w * inv_eps2);
    }
  }

  const int n = g.n;
  KahanSum grad;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = g.idx(i, j);
      if (j + 1 < n) {
        const double d1 = psi.u1[k + 1] - psi.u1[k];
        const double d2 = psi.u2[k + 1] - psi.u2[k];
        grad.add(d1 * d1 + d2 * d2);
      }
      if (i + 1 < n) {
        const double d1 = psi.u1[k + n] - psi.u1[k];
        const double d2 = psi.u2[k + n] - psi.u2[k];
        grad.add(d1 * d1 + d2 * d2);
      }
    }
  }
  return 0.5 * grad.value() + h * h * pot.value();
}

}  // namespace gln
