#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gln/analyze.hpp"
#include "gln/minimize.hpp"
#include "gln/model.hpp"

namespace gln {

enum class SweepScaling {
  linear_log,  // a = b eps |ln eps|
  square_log,  // a = b eps |ln eps|^2
  raw,         // a = b
};

double scaling_a(SweepScaling s, double eps, double b);
std::string scaling_name(SweepScaling s);

struct SweepSpec {
  std::vector<double> epsilons;  // each in (0, 1)
  SweepScaling scaling = SweepScaling::linear_log;
  std::vector<double> b_values;  // nonnegative
  double chi = 0.5;
  int n = 257;
  double half_width = 0.0;  // <= 0 selects rho + 3
  std::vector<SeedKind> seeds;  // empty selects the default multistart set
  bool continuation = true;
  MinimizeOptions minimize;
  int threads = 1;
  std::string out_dir;  // when nonempty, per-point fields and reports land here
};

struct SweepRow {
  double eps = 0.0;
  double b = 0.0;
  double a = 0.0;
  double energy_2d = 0.0;
  double energy_equivariant = 0.0;  // lower of the two radial reference runs
  double energy_scalar_ref = 0.0;       // descent seeded from the scalar profile
  double energy_equivariant_ref = 0.0;  // descent seeded from the degree-1 profile
  double symmetry_gap = 0.0;
  bool symmetry_broken = false;
  std::string phase_label;
  bool ambiguous = false;
  std::vector<double> zero_radii;
  std::optional<int> winding_loop;
  double tf_dev = 0.0;
  double alignment_min = 0.0;
  double bound_K = 0.0;
  std::optional<double> outer_dev;
  long iters = 0;
  double residual = 0.0;
  std::string status;  // "ok" or the failure text; failures do not stop the sweep
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // sorted by (eps, b)
};

/// One minimization per (eps, b) point: multistart 2D descent seeded with the
/// injected radial references (and, under continuation, the previous b's
/// minimizer), then analysis and classification. Points are distributed over
/// a worker pool; each point runs single threaded and lands in its fixed row
/// slot, so the result is identical for any thread count.
SweepResult run_sweep(const SweepSpec& spec);

/// Radial-reference energy minus the 2D multistart energy on the same grid.
/// Each reference is the converged descent run seeded from an injected radial
/// profile (scalar and degree-1 equivariant); descent from a radially
/// structured start stays in that symmetry class, so the runs measure the best
/// radial competitor with the same discretization as the 2D minimum. The
/// reference is the lower of the two. Never negative, since the reference runs
/// take part in the multistart. Throws when no reference run converges.
double symmetry_gap(const ModelParams& p, const GridSpec& grid,
                    const std::vector<SeedKind>& seeds,
                    const MinimizeOptions& opts = {});

struct Transition {
  double b = 0.0;
  bool monotone = true;
};

/// Midpoint between the b of the first adjacent from->to label crossing at
/// the given eps; with no adjacent crossing, the midpoint of the last `from`
/// and the first `to`. The monotone flag reports whether every `from` row
/// precedes every `to` row. Throws "no transition in range" when a label is
/// absent from the column.
Transition transition_estimate(const SweepResult& result, double eps,
                               const std::string& from_label,
                               const std::string& to_label);

void write_sweep_csv(const SweepResult& result, const std::string& path);

/// Gnuplot script for the (eps, b) phase diagram with the row data inlined.
void write_phase_script(const SweepResult& result, const std::string& path);

std::vector<SeedKind> default_sweep_seeds(const ModelParams& p);

}  // namespace gln
