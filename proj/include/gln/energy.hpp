#pragma once

#include "gln/model.hpp"

namespace gln {

/// Compensated accumulator; fixed accumulation order keeps results
/// independent of thread count and cuts cancellation error on large grids.
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

/// Discrete energy
///   E(u) = sum_edges  (u_next - u)^2 / 2
///        + h^2 sum_nodes [ -mu |u|^2/(2 eps^2) + |u|^4/(4 eps^2)
///                          - (a/eps) f . u ]
/// i.e. forward differences on cell edges plus nodal quadrature. Boundary
/// values are fixed at zero, so the nodal sum is trapezoid-consistent.
/// Throws std::domain_error("non-finite field") on non-finite input.
double energy(const VectorField2& u, const ModelParams& p);

/// Residual of the Euler-Lagrange equation at interior nodes,
///   R = eps^2 Lap_h u + mu u - |u|^2 u + eps a f,
/// with a zero boundary ring. R is exactly -eps^2/h^2 times the partial
/// derivative of the discrete energy with respect to the node value, so
/// driving sup|R| to zero is the same as reaching a discrete critical point.
VectorField2 el_residual(const VectorField2& u, const ModelParams& p);

double residual_sup(const VectorField2& r);

/// E(u) + nodal quadrature of mu^2/(4 eps^2) over the disc |x| < rho;
/// finite as eps -> 0 along minimizers (grows only like |ln eps|).
double renormalized_energy(const VectorField2& u, const ModelParams& p);

/// h^2-weighted inner product sum h^2 (a1 b1 + a2 b2), fixed order.
double field_dot(const VectorField2& a, const VectorField2& b);

/// h^2-weighted 1-norm sum h^2 (|u1| + |u2|).
double field_norm1(const VectorField2& u);

/// Directional derivative of the discrete energy at u along psi,
/// d/dt E(u + t psi) at t=0; equals -(1/eps^2) field_dot(el_residual(u), psi).
double energy_gradient_pairing(const VectorField2& u, const VectorField2& psi,
                               const ModelParams& p);

/// Second-order-exact expansion terms of E(u+psi)-E(u) around a critical
/// point: sum_edges (D psi)^2/2 + h^2 sum [ (|u|^2-mu)|psi|^2/(2 eps^2)
/// + (|psi|^2 + 2 u.psi)^2/(4 eps^2) ].  At an exact critical point this
/// equals the true difference; in general the two differ by the gradient
/// pairing against psi.
double energy_difference_predicted(const VectorField2& u,
                                   const VectorField2& psi,
                                   const ModelParams& p);

}  // namespace gln
