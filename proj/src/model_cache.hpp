#pragma once

// Internal cached-coefficient evaluator: mu and f sampled once per grid so
// descent iterations avoid re-evaluating exponentials at every node.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gln/energy.hpp"
#include "gln/model.hpp"

namespace gln::detail {

struct DiscreteModel {
  GridSpec grid;
  ModelParams params;
  double h;
  double inv_eps2;
  double eps2_h2;
  std::vector<double> mu, fx, fy;

  DiscreteModel(const GridSpec& g, const ModelParams& p)
      : grid(g),
        params(p),
        h(g.spacing()),
        inv_eps2(1.0 / (p.epsilon * p.epsilon)),
        eps2_h2(p.epsilon * p.epsilon / (g.spacing() * g.spacing())),
        mu(g.size()),
        fx(g.size()),
        fy(g.size()) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        const std::size_t k = g.idx(i, j);
        const Vec2 x = g.node(i, j);
        mu[k] = mu_eval(p, x);
        const Vec2 f = f_eval(p, x);
        fx[k] = f.x;
        fy[k] = f.y;
      }
    }
  }

  double energy(const VectorField2& u) const {
    if (!u.finite()) throw std::domain_error("non-finite field");
    const int n = grid.n;
    KahanSum grad, pot;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = grid.idx(i, j);
        if (j + 1 < n) {
          const double d1 = u.u1[k + 1] - u.u1[k];
          const double d2 = u.u2[k + 1] - u.u2[k];
          grad.add(d1 * d1 + d2 * d2);
        }
        if (i + 1 < n) {
          const double d1 = u.u1[k + n] - u.u1[k];
          const double d2 = u.u2[k + n] - u.u2[k];
          grad.add(d1 * d1 + d2 * d2);
        }
        const double a1 = u.u1[k], a2 = u.u2[k];
        const double m2 = a1 * a1 + a2 * a2;
        if (m2 == 0.0) continue;
        pot.add(-0.5 * mu[k] * m2 * inv_eps2 + 0.25 * m2 * m2 * inv_eps2 -
                (params.a / params.epsilon) * (fx[k] * a1 + fy[k] * a2));
      }
    }
    return 0.5 * grad.value() + h * h * pot.value();
  }

  void residual(const VectorField2& u, VectorField2& r) const {
    if (!u.finite()) throw std::domain_error("non-finite field");
    const int n = grid.n;
    std::fill(r.u1.begin(), r.u1.end(), 0.0);
    std::fill(r.u2.begin(), r.u2.end(), 0.0);
    const double ea = params.epsilon * params.a;
    for (int i = 1; i + 1 < n; ++i) {
      for (int j = 1; j + 1 < n; ++j) {
        const std::size_t k = grid.idx(i, j);
        const double a1 = u.u1[k], a2 = u.u2[k];
        const double lap1 =
            u.u1[k - 1] + u.u1[k + 1] + u.u1[k - n] + u.u1[k + n] - 4.0 * a1;
        const double lap2 =
            u.u2[k - 1] + u.u2[k + 1] + u.u2[k - n] + u.u2[k + n] - 4.0 * a2;
        const double m2 = a1 * a1 + a2 * a2;
        r.u1[k] = eps2_h2 * lap1 + (mu[k] - m2) * a1 + ea * fx[k];
        r.u2[k] = eps2_h2 * lap2 + (mu[k] - m2) * a2 + ea * fy[k];
      }
    }
  }
};

}  // namespace gln::detail
