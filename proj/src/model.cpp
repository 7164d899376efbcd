#include "gln/model.hpp"

#include <algorithm>
#include <cmath>

namespace gln {

ModelParams ModelParams::make(double epsilon, double a, double chi) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(a >= 0.0)) throw std::invalid_argument("a must be >= 0");
  if (!(chi > 0.0 && chi < 1.0))
    throw std::invalid_argument("chi must lie in (0,1)");
  ModelParams p;
  p.epsilon = epsilon;
  p.a = a;
  p.chi = chi;
  p.rho = std::sqrt(std::log(1.0 / chi));
  p.mu1 = -2.0 * p.rho * chi;
  return p;
}

double mu_eval(const ModelParams& p, Vec2 x) {
  return std::exp(-x.norm_sq()) - p.chi;
}

Vec2 f_eval(const ModelParams& p, Vec2 x) {
  (void)p;
  const double g = std::exp(-x.norm_sq());
  return {x.x * g, x.y * g};
}

GridSpec GridSpec::make(double half_width, int n) {
  if (n < 16) throw std::invalid_argument("grid needs n >= 16");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half_width must be positive");
  return {half_width, n};
}

bool ScalarField::finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

bool VectorField2::finite() const {
  auto ok = [](double v) { return std::isfinite(v); };
  return std::all_of(u1.begin(), u1.end(), ok) &&
         std::all_of(u2.begin(), u2.end(), ok);
}

void VectorField2::zero_boundary() {
  const int n = grid.n;
  for (int j = 0; j < n; ++j) {
    u1[grid.idx(0, j)] = u2[grid.idx(0, j)] = 0.0;
    u1[grid.idx(n - 1, j)] = u2[grid.idx(n - 1, j)] = 0.0;
  }
  for (int i = 0; i < n; ++i) {
    u1[grid.idx(i, 0)] = u2[grid.idx(i, 0)] = 0.0;
    u1[grid.idx(i, n - 1)] = u2[grid.idx(i, n - 1)] = 0.0;
  }
}

Vec2 VectorField2::sample(Vec2 x) const {
  const double L = grid.half_width, h = grid.spacing();
  const double tol = 1e-12 * std::max(1.0, L);
  if (x.x < -L - tol || x.x > L + tol || x.y < -L - tol || x.y > L + tol)
    throw std::invalid_argument("sample point outside grid");
  const double fx = std::clamp((x.x + L) / h, 0.0, double(grid.n - 1));
  const double fy = std::clamp((x.y + L) / h, 0.0, double(grid.n - 1));
  int j = std::min(int(fx), grid.n - 2);
  int i = std::min(int(fy), grid.n - 2);
  const double tx = fx - j, ty = fy - i;
  auto blend = [&](const std::vector<double>& u) {
    const double v00 = u[grid.idx(i, j)], v01 = u[grid.idx(i, j + 1)];
    const double v10 = u[grid.idx(i + 1, j)], v11 = u[grid.idx(i + 1, j + 1)];
    return (1 - ty) * ((1 - tx) * v00 + tx * v01) +
           ty * ((1 - tx) * v10 + tx * v11);
  };
  return {blend(u1), blend(u2)};
}

ScalarField sample_mu(const ModelParams& p, const GridSpec& g) {
  ScalarField out = ScalarField::zeros(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) out.at(i, j) = mu_eval(p, g.node(i, j));
  return out;
}

ScalarField sqrt_mu_plus(const ModelParams& p, const GridSpec& g) {
  ScalarField out = ScalarField::zeros(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      out.at(i, j) = std::sqrt(std::max(0.0, mu_eval(p, g.node(i, j))));
  return out;
}

ScalarField amplitude_field(const VectorField2& u) {
  ScalarField out = ScalarField::zeros(u.grid);
  for (std::size_t k = 0; k < u.u1.size(); ++k)
    out.values[k] = std::hypot(u.u1[k], u.u2[k]);
  return out;
}

}  // namespace gln
