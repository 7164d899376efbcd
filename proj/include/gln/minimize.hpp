#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gln/energy.hpp"
#include "gln/model.hpp"

namespace gln {

struct SeedKind {
  enum class Tag { thomas_fermi, radial_scalar, vortex, random, file, direct };
  Tag tag = Tag::thomas_fermi;
  Vec2 center{};                   // vortex
  int degree = 1;                  // vortex, +1 or -1
  std::uint64_t rng_seed = 0;      // random
  std::string path;                // file
  std::shared_ptr<const VectorField2> field;  // direct (in-memory warm start)

  static SeedKind thomas_fermi();
  static SeedKind radial_scalar();
  static SeedKind vortex(Vec2 center, int degree);
  static SeedKind random(std::uint64_t rng_seed);
  static SeedKind file(std::string path);
  static SeedKind direct(VectorField2 field);
  static SeedKind direct(std::shared_ptr<const VectorField2> field);

  std::string describe() const;
};

VectorField2 seed_field(const ModelParams& p, const GridSpec& g,
                        const SeedKind& kind);

/// Clamp both components to [-bound, bound].
void truncate(VectorField2& u, double bound);

enum class StepRule { fixed, adaptive_bb, nonlinear_cg };

struct MinimizeOptions {
  int max_iters = 50000;
  double residual_tol = 1e-8;  // sup norm of the EL residual
  StepRule step_rule = StepRule::adaptive_bb;
  double fixed_step = 0.0;       // <= 0 selects the stability-bound default
  double truncation_bound = 0.0; // <= 0 selects 1.5 sup sqrt(mu^+) + 1
  int truncate_every = 50;
};

struct MinimizeResult {
  VectorField2 field;
  double energy = 0.0;
  double residual_sup = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<double> energy_trace;  // accepted energies, nonincreasing
};

/// Descend the discrete energy from the given start until sup|R| drops under
/// residual_tol or max_iters runs out (the latter is reported, not thrown).
/// A truncation pass runs every truncate_every iterations. At a = 0 the
/// zero-mode orbit is fixed afterwards by rotating values so the
/// mass-weighted mean direction is (1, 0).
MinimizeResult minimize(const ModelParams& p, VectorField2 start,
                        const MinimizeOptions& opts);

MinimizeResult minimize_from_seed(const ModelParams& p, const GridSpec& g,
                                  const SeedKind& seed,
                                  const MinimizeOptions& opts);

struct SeedOutcome {
  SeedKind kind;
  double energy = 0.0;
  double residual_sup = 0.0;
  int iters = 0;
  bool converged = false;
};

struct MultistartResult {
  MinimizeResult best;
  std::size_t best_index = 0;
  std::vector<SeedOutcome> outcomes;
};

/// Run every seed and keep the lowest-energy converged run; throws when no
/// seed converges, listing the per-seed residuals.
MultistartResult multistart_global(const ModelParams& p, const GridSpec& g,
                                   const MinimizeOptions& opts,
                                   const std::vector<SeedKind>& seeds);

/// Rotate values so the mass-weighted mean direction is (1,0); a no-op when
/// the mean direction is numerically undefined.
void apply_phase_gauge(VectorField2& u);

struct EnergyDifference {
  double actual = 0.0;
  double predicted = 0.0;
};

/// Compare E(u+psi) - E(u) against the expansion around a critical point;
/// for a converged u the two agree up to the residual paired with psi.
EnergyDifference energy_difference_check(const VectorField2& u,
                                         const VectorField2& psi,
                                         const ModelParams& p);

double default_truncation_bound(const ModelParams& p);
double default_amp_tol(const ModelParams& p);

}  // namespace gln
