#include "gln/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gln/energy.hpp"
#include "gln/field_io.hpp"
#include "gln/radial.hpp"

namespace gln {
namespace {

// The radial references are the descent runs seeded from the injected 1D
// profiles: measuring them with the same discrete solver as the 2D minimum
// makes the gap a pure symmetry statement instead of a quadrature artifact.
struct RadialRefs {
  std::shared_ptr<VectorField2> scalar_field;
  std::shared_ptr<VectorField2> equi_field;
  std::string note;
};

RadialRefs radial_injections(const ModelParams& p, const GridSpec& grid) {
  RadialRefs out;
  const RadialGrid rg = default_model_radial_grid(p, grid.half_width);
  try {
    RadialProfile y = solve_scalar_radial(p, rg);
    out.scalar_field = std::make_shared<VectorField2>(inject_scalar(y, grid));
  } catch (const std::exception& e) {
    out.note += std::string("scalar reference failed: ") + e.what() + "; ";
  }
  // without forcing the equivariant profile is identically zero, an exact
  // saddle of the energy; injecting it would hand the multistart a spurious
  // "converged" reference, so only build it when a != 0
  if (p.a != 0.0) {
    try {
      RadialProfile y = solve_equivariant_radial(p, rg);
      out.equi_field =
          std::make_shared<VectorField2>(inject_equivariant(y, grid));
    } catch (const std::exception& e) {
      out.note +=
          std::string("equivariant reference failed: ") + e.what() + "; ";
    }
  }
  if (!out.scalar_field && !out.equi_field)
    throw std::runtime_error("both radial references failed: " + out.note);
  return out;
}

std::string csv_cell_opt(const std::optional<double>& v) {
  return v ? format_g17(*v) : std::string();
}

}  // namespace

double scaling_a(SweepScaling s, double eps, double b) {
  const double l = std::abs(std::log(eps));
  switch (s) {
    case SweepScaling::linear_log:
      return b * eps * l;
    case SweepScaling::square_log:
      return b * eps * l * l;
    case SweepScaling::raw:
      return b;
  }
  return b;
}

std::string scaling_name(SweepScaling s) {
  switch (s) {
    case SweepScaling::linear_log:
      return "linear_log";
    case SweepScaling::square_log:
      return "square_log";
    case SweepScaling::raw:
      return "raw";
  }
  return "?";
}

std::vector<SeedKind> default_sweep_seeds(const ModelParams& p) {
  std::vector<SeedKind> seeds;
  seeds.push_back(SeedKind::thomas_fermi());
  seeds.push_back(SeedKind::vortex({0.0, 0.0}, 1));
  seeds.push_back(SeedKind::vortex({p.rho, 0.0}, 1));
  return seeds;
}

double symmetry_gap(const ModelParams& p, const GridSpec& grid,
                    const std::vector<SeedKind>& seeds,
                    const MinimizeOptions& opts) {
  RadialRefs refs = radial_injections(p, grid);
  std::vector<SeedKind> all = seeds.empty() ? default_sweep_seeds(p) : seeds;
  const std::size_t i_scalar = refs.scalar_field ? all.size() : SIZE_MAX;
  if (refs.scalar_field) all.push_back(SeedKind::direct(refs.scalar_field));
  const std::size_t i_equi = refs.equi_field ? all.size() : SIZE_MAX;
  if (refs.equi_field) all.push_back(SeedKind::direct(refs.equi_field));
  MultistartResult ms = multistart_global(p, grid, opts, all);
  double ref = std::numeric_limits<double>::infinity();
  for (std::size_t i : {i_scalar, i_equi})
    if (i != SIZE_MAX && ms.outcomes[i].converged)
      ref = std::min(ref, ms.outcomes[i].energy);
  if (!(ref < std::numeric_limits<double>::infinity()))
    throw std::runtime_error("no radial reference run converged");
  return ref - ms.best.energy;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.epsilons.empty() || spec.b_values.empty())
    throw std::invalid_argument("sweep needs at least one eps and one b");
  for (double e : spec.epsilons)
    if (!(e > 0.0 && e < 1.0))
      throw std::invalid_argument("sweep eps values must lie in (0, 1)");
  for (double b : spec.b_values)
    if (!(b >= 0.0))
      throw std::invalid_argument("sweep b values must be nonnegative");
  if (spec.n < 16) throw std::invalid_argument("sweep grid too small");

  std::vector<double> eps_sorted = spec.epsilons;
  std::sort(eps_sorted.begin(), eps_sorted.end());
  eps_sorted.erase(std::unique(eps_sorted.begin(), eps_sorted.end()),
                   eps_sorted.end());
  std::vector<double> b_sorted = spec.b_values;
  std::sort(b_sorted.begin(), b_sorted.end());
  b_sorted.erase(std::unique(b_sorted.begin(), b_sorted.end()),
                 b_sorted.end());

  const std::size_t ne = eps_sorted.size();
  const std::size_t nb = b_sorted.size();

  SweepResult result;
  result.spec = spec;
  result.rows.assign(ne * nb, SweepRow{});

  if (!spec.out_dir.empty())
    std::filesystem::create_directories(spec.out_dir);

  // Chains are the scheduling unit: one per eps under continuation (the b
  // column is warm started in ascending order), one per point otherwise.
  struct Chain {
    std::size_t ei;
    std::vector<std::size_t> bis;
  };
  std::vector<Chain> chains;
  if (spec.continuation) {
    for (std::size_t ei = 0; ei < ne; ++ei) {
      Chain c{ei, {}};
      for (std::size_t bi = 0; bi < nb; ++bi) c.bis.push_back(bi);
      chains.push_back(std::move(c));
    }
  } else {
    for (std::size_t ei = 0; ei < ne; ++ei)
      for (std::size_t bi = 0; bi < nb; ++bi)
        chains.push_back({ei, {bi}});
  }

  auto run_point = [&](std::size_t ei, std::size_t bi,
                       const std::shared_ptr<VectorField2>& warm)
      -> std::shared_ptr<VectorField2> {
    SweepRow& row = result.rows[ei * nb + bi];
    row.eps = eps_sorted[ei];
    row.b = b_sorted[bi];
    row.a = scaling_a(spec.scaling, row.eps, row.b);
    std::shared_ptr<VectorField2> best_field;
    try {
      const ModelParams p = ModelParams::make(row.eps, row.a, spec.chi);
      const double L = spec.half_width > 0.0 ? spec.half_width : p.rho + 3.0;
      const GridSpec grid = GridSpec::make(L, spec.n);

      RadialRefs refs = radial_injections(p, grid);

      std::vector<SeedKind> seeds =
          spec.seeds.empty() ? default_sweep_seeds(p) : spec.seeds;
      const std::size_t i_scalar = refs.scalar_field ? seeds.size() : SIZE_MAX;
      if (refs.scalar_field) seeds.push_back(SeedKind::direct(refs.scalar_field));
      const std::size_t i_equi = refs.equi_field ? seeds.size() : SIZE_MAX;
      if (refs.equi_field) seeds.push_back(SeedKind::direct(refs.equi_field));
      if (warm && warm->grid.same_as(grid))
        seeds.push_back(SeedKind::direct(warm));

      MultistartResult ms = multistart_global(p, grid, spec.minimize, seeds);
      row.energy_2d = ms.best.energy;
      row.iters = ms.best.iters;
      row.residual = ms.best.residual_sup;

      const double nan = std::numeric_limits<double>::quiet_NaN();
      auto run_energy = [&](std::size_t i) {
        return i != SIZE_MAX && ms.outcomes[i].converged ? ms.outcomes[i].energy
                                                         : nan;
      };
      row.energy_scalar_ref = run_energy(i_scalar);
      row.energy_equivariant_ref = run_energy(i_equi);
      double ref = std::numeric_limits<double>::infinity();
      if (row.energy_scalar_ref == row.energy_scalar_ref)
        ref = std::min(ref, row.energy_scalar_ref);
      if (row.energy_equivariant_ref == row.energy_equivariant_ref)
        ref = std::min(ref, row.energy_equivariant_ref);
      if (ref < std::numeric_limits<double>::infinity()) {
        row.energy_equivariant = ref;
        row.symmetry_gap = ref - row.energy_2d;
        row.symmetry_broken =
            row.symmetry_gap > 1e-5 * std::abs(row.energy_2d);
      } else {
        row.energy_equivariant = nan;
        row.symmetry_gap = nan;
        row.symmetry_broken = false;
        if (!refs.note.empty()) refs.note += " ";
        refs.note += "no radial reference run converged;";
      }

      AnalysisReport rep = analyze_field(ms.best.field, p);
      row.phase_label = phase_label_name(rep.phase.label);
      row.ambiguous = rep.phase.ambiguous;
      for (const Zero& z : rep.zeros) row.zero_radii.push_back(z.location.norm());
      row.winding_loop = rep.winding_loop;
      row.tf_dev = rep.tf_sup_dev;
      row.alignment_min = rep.alignment_min;
      row.bound_K = rep.bound_K;
      row.outer_dev = rep.outer_dev;
      row.status = refs.note.empty() ? "ok" : "ok (" + refs.note + ")";
      best_field = std::make_shared<VectorField2>(ms.best.field);

      if (!spec.out_dir.empty()) {
        std::ostringstream base;
        base << spec.out_dir << "/point_e" << ei << "_b" << bi;
        write_field(base.str() + ".glnf", *best_field);
        std::ofstream rf(base.str() + ".txt");
        rf << "eps = " << format_g17(row.eps) << "\n"
           << "b = " << format_g17(row.b) << "\n"
           << "a = " << format_g17(row.a) << "\n"
           << "energy_2d = " << format_g17(row.energy_2d) << "\n"
           << "energy_reference = " << format_g17(row.energy_equivariant)
           << "\n\n"
           << report_to_text(rep, p);
      }
    } catch (const std::exception& e) {
      row.status = e.what();
      row.phase_label = "error";
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.energy_2d = nan;
      row.energy_equivariant = nan;
      row.energy_scalar_ref = nan;
      row.energy_equivariant_ref = nan;
      row.symmetry_gap = nan;
      row.tf_dev = nan;
      row.alignment_min = nan;
      row.bound_K = nan;
    }
    return best_field;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= chains.size()) break;
      std::shared_ptr<VectorField2> warm;
      for (std::size_t bi : chains[k].bis) {
        auto got = run_point(chains[k].ei, bi, warm);
        if (got) warm = std::move(got);
      }
    }
  };

  int nt = std::max(1, spec.threads);
  nt = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(nt), chains.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  return result;
}

Transition transition_estimate(const SweepResult& result, double eps,
                               const std::string& from_label,
                               const std::string& to_label) {
  struct Entry {
    double b;
    std::string label;
  };
  std::vector<Entry> col;
  for (const SweepRow& r : result.rows)
    if (r.eps == eps) col.push_back({r.b, r.phase_label});
  std::sort(col.begin(), col.end(),
            [](const Entry& a, const Entry& b) { return a.b < b.b; });

  int last_from = -1, first_to = -1, first_from = -1, last_to = -1;
  for (int i = 0; i < static_cast<int>(col.size()); ++i) {
    if (col[i].label == from_label) {
      if (first_from < 0) first_from = i;
      last_from = i;
    }
    if (col[i].label == to_label) {
      if (first_to < 0) first_to = i;
      last_to = i;
    }
  }
  if (last_from < 0 || first_to < 0)
    throw std::runtime_error("no transition in range");

  Transition tr;
  tr.monotone = last_from < first_to;
  int cross = -1;
  for (int i = 0; i + 1 < static_cast<int>(col.size()); ++i) {
    if (col[i].label == from_label && col[i + 1].label == to_label) {
      cross = i;
      break;
    }
  }
  if (cross >= 0)
    tr.b = 0.5 * (col[cross].b + col[cross + 1].b);
  else {
    tr.b = 0.5 * (col[last_from].b + col[first_to].b);
    tr.monotone = false;
  }
  return tr;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "eps,b,a,energy_2d,energy_reference,energy_scalar_ref,"
         "energy_equivariant_ref,symmetry_gap,symmetry_broken,phase,"
         "ambiguous,zero_count,zero_radii,winding_loop,tf_dev,alignment_min,"
         "bound_K,outer_dev,iters,residual,status\n";
  for (const SweepRow& r : result.rows) {
    std::ostringstream radii;
    for (std::size_t i = 0; i < r.zero_radii.size(); ++i) {
      if (i) radii << ';';
      radii << format_g17(r.zero_radii[i]);
    }
    out << format_g17(r.eps) << ',' << format_g17(r.b) << ','
        << format_g17(r.a) << ',' << format_g17(r.energy_2d) << ','
        << format_g17(r.energy_equivariant) << ','
        << format_g17(r.energy_scalar_ref) << ','
        << format_g17(r.energy_equivariant_ref) << ','
        << format_g17(r.symmetry_gap) << ','
        << (r.symmetry_broken ? 1 : 0) << ',' << r.phase_label << ','
        << (r.ambiguous ? 1 : 0) << ',' << r.zero_radii.size() << ','
        << radii.str() << ','
        << (r.winding_loop ? std::to_string(*r.winding_loop) : std::string())
        << ',' << format_g17(r.tf_dev) << ',' << format_g17(r.alignment_min)
        << ',' << format_g17(r.bound_K) << ',' << csv_cell_opt(r.outer_dev)
        << ',' << r.iters << ',' << format_g17(r.residual) << ','
        << '"' << r.status << '"' << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_phase_script(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const char* labels[] = {"NoZero", "ShadowVortex", "StandardVortexOffCenter",
                          "StandardVortexCenter", "error"};
  out << "set terminal pngcairo size 900,700\n"
      << "set output 'phase_diagram.png'\n"
      << "set xlabel 'eps'\nset ylabel 'b'\n"
      << "set logscale x\n"
      << "set key outside\n"
      << "plot ";
  for (int k = 0; k < 5; ++k) {
    if (k) out << ", ";
    out << "'-' using 1:2 with points pt " << (4 + k) << " ps 1.6 title '"
        << labels[k] << "'";
  }
  out << "\n";
  for (const char* lbl : labels) {
    bool any = false;
    for (const SweepRow& r : result.rows) {
      if (r.phase_label != lbl) continue;
      out << format_g17(r.eps) << ' ' << format_g17(r.b) << '\n';
      any = true;
    }
    if (!any) out << "0 -1\n";  // keep the block non-empty for gnuplot
    out << "e\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace gln
