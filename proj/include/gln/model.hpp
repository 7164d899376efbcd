#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gln {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
  /// Counterclockwise rotation by angle `t`.
  Vec2 rotated(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    return {c * x - s * y, s * x + c * y};
  }
};

/// Physical parameters of the light-matter model.
///
/// The pump profile is mu(x) = exp(-|x|^2) - chi with chi in (0,1), and the
/// electric forcing is f(x) = -grad(mu)/2 = x exp(-|x|^2). The interface
/// radius rho (unique zero of mu_rad) and the slope mu1 = mu_rad'(rho) < 0
/// are derived on construction.
struct ModelParams {
  double epsilon = 0.05;  ///< coherence scale, > 0
  double a = 0.0;         ///< laser intensity, >= 0
  double chi = 0.5;       ///< Gaussian offset, in (0,1)
  double rho = 0.0;       ///< sqrt(ln(1/chi)), zero of mu_rad
  double mu1 = 0.0;       ///< mu_rad'(rho) = -2 rho chi

  static ModelParams make(double epsilon, double a, double chi = 0.5);

  double mu_rad(double r) const { return std::exp(-r * r) - chi; }
  double mu_rad_prime(double r) const { return -2.0 * r * std::exp(-r * r); }
  double f_rad(double r) const { return r * std::exp(-r * r); }
};

double mu_eval(const ModelParams& p, Vec2 x);
Vec2 f_eval(const ModelParams& p, Vec2 x);

/// Uniform n x n grid on the square [-L, L]^2, spacing h = 2L/(n-1).
/// Node (i, j) sits at (x, y) = (-L + j h, -L + i h); storage is row-major.
struct GridSpec {
  double half_width = 0.0;
  int n = 0;

  static GridSpec make(double half_width, int n);

  double spacing() const { return 2.0 * half_width / (n - 1); }
  double coord(int k) const { return -half_width + k * spacing(); }
  Vec2 node(int i, int j) const { return {coord(j), coord(i)}; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n - 1 || j == n - 1;
  }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n + j;
  }
  bool same_as(const GridSpec& o) const {
    return n == o.n && half_width == o.half_width;
  }
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  static ScalarField zeros(const GridSpec& g) {
    return {g, std::vector<double>(g.size(), 0.0)};
  }
  double& at(int i, int j) { return values[grid.idx(i, j)]; }
  double at(int i, int j) const { return values[grid.idx(i, j)]; }
  bool finite() const;
};

/// Two-component field sampled on a square grid, zero on the boundary ring
/// (Dirichlet truncation of the plane).
struct VectorField2 {
  GridSpec grid;
  std::vector<double> u1, u2;

  static VectorField2 zeros(const GridSpec& g) {
    return {g, std::vector<double>(g.size(), 0.0),
            std::vector<double>(g.size(), 0.0)};
  }
  double& at1(int i, int j) { return u1[grid.idx(i, j)]; }
  double at1(int i, int j) const { return u1[grid.idx(i, j)]; }
  double& at2(int i, int j) { return u2[grid.idx(i, j)]; }
  double at2(int i, int j) const { return u2[grid.idx(i, j)]; }
  Vec2 at(int i, int j) const {
    const auto k = grid.idx(i, j);
    return {u1[k], u2[k]};
  }
  double amplitude(int i, int j) const { return at(i, j).norm(); }

  bool finite() const;
  void zero_boundary();
  /// Bilinear interpolation at a physical point; `x` must lie in the square.
  Vec2 sample(Vec2 x) const;
};

ScalarField sample_mu(const ModelParams& p, const GridSpec& g);
ScalarField sqrt_mu_plus(const ModelParams& p, const GridSpec& g);
ScalarField amplitude_field(const VectorField2& u);

/// max over the closed plane of sqrt(mu^+) = sqrt(1 - chi), attained at 0.
inline double sup_sqrt_mu_plus(const ModelParams& p) {
  return std::sqrt(1.0 - p.chi);
}

}  // namespace gln
