#pragma once

// Independent reference computations for the test suite. Everything here is
// deliberately built from different numerics than the library (shooting
// instead of collocation, 1D radial quadrature instead of the 2D nodal sum)
// so agreement is evidence, not tautology.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "gln/model.hpp"

namespace oracles {

// Closed forms for the chi = 0.5 pump profile, frozen to full precision:
// the forcing peak e^{-1/2}/sqrt(2) at r = 1/sqrt(2), and the forcing value
// rho * chi at the interface radius.
inline constexpr double kForcingMax = 0.4288819424803531;
inline constexpr double kForcingAtRho = 0.4162773055788489;

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  if (n < 2) throw std::invalid_argument("simpson needs n >= 2");
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; i += 2) odd += f(a + i * h);
  for (int i = 2; i < n; i += 2) even += f(a + i * h);
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// Shooting solver for y'' = s y + 2 y^3 on [-6, S], decaying at +infinity.
// Integrates downward from s = S with tail data y(S) = lam,
// y'(S) = lam (-sqrt(S) - 1/(4 S)) and bisects lam between trajectories that
// cross below zero (tail too small) and ones that blow up (tail too large).
// Downward integration follows the growing direction, so the bisection is
// well conditioned. Returns y(0) of the separating trajectory.
inline double p2_shoot_y0(double S = 14.0, double h = 2.5e-4) {
  const int steps_total = static_cast<int>(std::lround((S + 6.0) / h));
  const long zero_step = std::lround(S / h);
  if (std::abs(zero_step * h - S) > 1e-12)
    throw std::invalid_argument("shooting step must divide S");

  struct Run {
    int verdict = 0;  // -1 under, +1 over
    double y0 = std::numeric_limits<double>::quiet_NaN();
    bool have_y0 = false;
  };
  auto shoot = [&](double lam) {
    double y = lam;
    double z = lam * (-std::sqrt(S) - 1.0 / (4.0 * S));
    Run run;
    auto rhs = [](double s, double y_, double z_, double* dy, double* dz) {
      *dy = z_;
      *dz = s * y_ + 2.0 * y_ * y_ * y_;
    };
    for (int k = 0; k < steps_total; ++k) {
      const double s = S - k * h;
      double k1y, k1z, k2y, k2z, k3y, k3z, k4y, k4z;
      rhs(s, y, z, &k1y, &k1z);
      rhs(s - 0.5 * h, y - 0.5 * h * k1y, z - 0.5 * h * k1z, &k2y, &k2z);
      rhs(s - 0.5 * h, y - 0.5 * h * k2y, z - 0.5 * h * k2z, &k3y, &k3z);
      rhs(s - h, y - h * k3y, z - h * k3z, &k4y, &k4z);
      y -= h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      z -= h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
      if (k + 1 == zero_step) {
        run.y0 = y;
        run.have_y0 = true;
      }
      if (y < -1e-3) {
        run.verdict = -1;
        return run;
      }
      if (y > 50.0) {
        run.verdict = +1;
        return run;
      }
    }
    // Survived to s = -6: compare against the outer balance sqrt(|s|/2).
    run.verdict = y < std::sqrt(3.0) ? -1 : +1;
    return run;
  };

  double lo = 0.0, hi = 1e-12;
  while (shoot(hi).verdict < 0) {
    hi *= 4.0;
    if (hi > 1.0) throw std::runtime_error("shooting bracket not found");
  }
  Run lo_run, hi_run;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo > 0.0 ? 0.5 * (lo + hi) : hi / 4.0;
    const Run r = shoot(mid);
    if (r.verdict < 0) {
      lo = mid;
      lo_run = r;
    } else {
      hi = mid;
      hi_run = r;
    }
    if (lo_run.have_y0 && hi_run.have_y0 &&
        std::abs(lo_run.y0 - hi_run.y0) < 1e-9)
      break;
    if (lo > 0.0 && (hi - lo) < 1e-15 * hi) break;
  }
  if (!lo_run.have_y0 || !hi_run.have_y0)
    throw std::runtime_error("shooting did not bracket y(0)");
  return 0.5 * (lo_run.y0 + hi_run.y0);
}

// Renormalized energy of the capped Thomas-Fermi comparison map by radial
// quadrature. The map is sqrt(mu) up to rho - ell, then linear down to zero
// at rho, then zero; its renormalized energy reduces to
//   2 pi [ int_0^inf (psi')^2 r / 2 dr + (1/4 eps^2) int_0^rho (psi^2-mu)^2 r dr ].
inline double capped_tf_renormalized_1d(const gln::ModelParams& p,
                                        double ell) {
  const double rho = p.rho;
  if (!(ell > 0.0 && ell < rho))
    throw std::invalid_argument("collar width out of range");
  const double edge = std::sqrt(p.mu_rad(rho - ell));
  const double grad_bulk = simpson(
      [&](double r) {
        const double mu = p.mu_rad(r);
        const double dmu = p.mu_rad_prime(r);
        return 0.5 * dmu * dmu / (4.0 * mu) * r;
      },
      0.0, rho - ell, 400000);
  const double slope = edge / ell;
  const double grad_collar =
      0.5 * slope * slope * 0.5 * (rho * rho - (rho - ell) * (rho - ell));
  const double pot_collar = simpson(
      [&](double r) {
        const double psi = edge * (rho - r) / ell;
        const double d = psi * psi - p.mu_rad(r);
        return d * d * r;
      },
      rho - ell, rho, 200000);
  return 2.0 * M_PI *
         (grad_bulk + grad_collar +
          pot_collar / (4.0 * p.epsilon * p.epsilon));
}

// Nodal iid noise smoothed by a few neighbor-average passes, zero boundary.
inline gln::VectorField2 smooth_random_field(const gln::GridSpec& g,
                                             std::uint64_t seed,
                                             int passes = 3,
                                             double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-amp, amp);
  gln::VectorField2 u = gln::VectorField2::zeros(g);
  for (int i = 1; i + 1 < g.n; ++i)
    for (int j = 1; j + 1 < g.n; ++j) {
      u.at1(i, j) = uni(rng);
      u.at2(i, j) = uni(rng);
    }
  gln::VectorField2 v = u;
  for (int pass = 0; pass < passes; ++pass) {
    for (int i = 1; i + 1 < g.n; ++i)
      for (int j = 1; j + 1 < g.n; ++j) {
        v.at1(i, j) = 0.5 * u.at1(i, j) +
                      0.125 * (u.at1(i - 1, j) + u.at1(i + 1, j) +
                               u.at1(i, j - 1) + u.at1(i, j + 1));
        v.at2(i, j) = 0.5 * u.at2(i, j) +
                      0.125 * (u.at2(i - 1, j) + u.at2(i + 1, j) +
                               u.at2(i, j - 1) + u.at2(i, j + 1));
      }
    std::swap(u, v);
  }
  u.zero_boundary();
  return u;
}

// Sup difference after the best global value rotation of b onto a.
inline double sup_diff_mod_rotation(const gln::VectorField2& a,
                                    const gln::VectorField2& b) {
  if (!a.grid.same_as(b.grid))
    throw std::invalid_argument("grid mismatch");
  double cdot = 0.0, ccross = 0.0;
  for (std::size_t k = 0; k < a.u1.size(); ++k) {
    cdot += b.u1[k] * a.u1[k] + b.u2[k] * a.u2[k];
    ccross += b.u1[k] * a.u2[k] - b.u2[k] * a.u1[k];
  }
  const double beta = std::atan2(ccross, cdot);
  const double c = std::cos(beta), s = std::sin(beta);
  double sup = 0.0;
  for (std::size_t k = 0; k < a.u1.size(); ++k) {
    const double r1 = c * b.u1[k] - s * b.u2[k];
    const double r2 = s * b.u1[k] + c * b.u2[k];
    sup = std::max(sup, std::hypot(a.u1[k] - r1, a.u2[k] - r2));
  }
  return sup;
}

}  // namespace oracles
