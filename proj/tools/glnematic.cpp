#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gln/analyze.hpp"
#include "gln/config.hpp"
#include "gln/energy.hpp"
#include "gln/field_io.hpp"
#include "gln/minimize.hpp"
#include "gln/model.hpp"
#include "gln/painleve.hpp"
#include "gln/radial.hpp"
#include "gln/sweep.hpp"

namespace {

using namespace gln;

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  int threads = 0;
};

Config load_config(const CommonFlags& fl) {
  Config cfg;
  if (!fl.config_path.empty()) cfg = Config::from_file(fl.config_path);
  for (const std::string& kv : fl.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  if (!fl.out.empty()) cfg.set("out", fl.out);
  return cfg;
}

int resolve_threads(int flag_value, const Config& cfg) {
  if (flag_value > 0) return flag_value;
  const int from_cfg = cfg.get_int("threads", 0);
  if (from_cfg > 0) return from_cfg;
  if (const char* env = std::getenv("GLNEMATIC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  return 1;
}

double parse_coord(const std::string& tok, const ModelParams& p) {
  if (tok == "rho") return p.rho;
  if (tok == "-rho") return -p.rho;
  const char* s = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw std::invalid_argument("cannot parse seed coordinate '" + tok + "'");
  return v;
}

std::vector<SeedKind> parse_seeds(const std::string& text,
                                  const ModelParams& p) {
  std::vector<SeedKind> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = tok.find_last_not_of(" \t");
    tok = tok.substr(b, e - b + 1);
    std::vector<std::string> parts;
    std::istringstream tin(tok);
    std::string piece;
    while (std::getline(tin, piece, ':')) parts.push_back(piece);
    if (parts.empty()) continue;
    const std::string& head = parts[0];
    if (head == "tf" || head == "thomas_fermi") {
      out.push_back(SeedKind::thomas_fermi());
    } else if (head == "radial" || head == "scalar") {
      out.push_back(SeedKind::radial_scalar());
    } else if (head == "vortex") {
      if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument(
            "seed 'vortex' needs vortex:X:Y or vortex:X:Y:DEGREE");
      const double x = parse_coord(parts[1], p);
      const double y = parse_coord(parts[2], p);
      int deg = 1;
      if (parts.size() == 4) deg = std::stoi(parts[3]);
      out.push_back(SeedKind::vortex({x, y}, deg));
    } else if (head == "random") {
      if (parts.size() != 2)
        throw std::invalid_argument("seed 'random' needs random:SEED");
      out.push_back(SeedKind::random(std::stoull(parts[1])));
    } else if (head == "file") {
      if (parts.size() < 2)
        throw std::invalid_argument("seed 'file' needs file:PATH");
      std::string path = tok.substr(tok.find(':') + 1);
      out.push_back(SeedKind::file(path));
    } else {
      throw std::invalid_argument("unknown seed kind '" + head + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

StepRule parse_step_rule(const std::string& s) {
  if (s == "fixed") return StepRule::fixed;
  if (s == "adaptive_bb") return StepRule::adaptive_bb;
  if (s == "nonlinear_cg") return StepRule::nonlinear_cg;
  throw std::invalid_argument(
      "step_rule must be fixed, adaptive_bb, or nonlinear_cg; got '" + s + "'");
}

MinimizeOptions minimize_options_from(const Config& cfg) {
  MinimizeOptions opts;
  opts.max_iters = cfg.get_int("max_iters", opts.max_iters);
  opts.residual_tol = cfg.get_double("tol", opts.residual_tol);
  opts.step_rule = parse_step_rule(cfg.get_string("step_rule", "adaptive_bb"));
  opts.fixed_step = cfg.get_double("fixed_step", 0.0);
  opts.truncation_bound = cfg.get_double("truncation_bound", 0.0);
  opts.truncate_every = cfg.get_int("truncate_every", opts.truncate_every);
  return opts;
}

ModelParams params_from(const Config& cfg, double eps_dflt, double a_dflt) {
  return ModelParams::make(cfg.get_double("epsilon", eps_dflt),
                           cfg.get_double("a", a_dflt),
                           cfg.get_double("chi", 0.5));
}

GridSpec grid_from(const Config& cfg, const ModelParams& p, int n_dflt) {
  const double L0 = cfg.get_double("L", 0.0);
  const double L = L0 > 0.0 ? L0 : p.rho + 3.0;
  return GridSpec::make(L, cfg.get_int("n", n_dflt));
}

void write_report_kv(const std::string& path, const AnalysisReport& rep,
                     const ModelParams& p,
                     const std::vector<std::pair<std::string, std::string>>&
                         extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "epsilon = " << format_g17(p.epsilon) << "\n";
  out << "a = " << format_g17(p.a) << "\n";
  out << "chi = " << format_g17(p.chi) << "\n";
  out << "rho = " << format_g17(p.rho) << "\n";
  for (const auto& [k, v] : extra) out << k << " = " << v << "\n";
  out << "zero_count = " << rep.zeros.size() << "\n";
  for (std::size_t i = 0; i < rep.zeros.size(); ++i) {
    const Zero& z = rep.zeros[i];
    out << "zero_" << i << "_x = " << format_g17(z.location.x) << "\n";
    out << "zero_" << i << "_y = " << format_g17(z.location.y) << "\n";
    out << "zero_" << i << "_radius = " << format_g17(z.location.norm())
        << "\n";
    out << "zero_" << i << "_winding = " << z.winding << "\n";
    out << "zero_" << i << "_dip = " << format_g17(z.dip) << "\n";
  }
  if (rep.winding_loop)
    out << "winding_loop = " << *rep.winding_loop << "\n";
  else
    out << "winding_loop_error = " << rep.winding_note << "\n";
  out << "tf_sup_dev = " << format_g17(rep.tf_sup_dev) << "\n";
  out << "alignment_min = " << format_g17(rep.alignment_min) << "\n";
  out << "bound_K = " << format_g17(rep.bound_K) << "\n";
  if (rep.outer_dev)
    out << "outer_dev = " << format_g17(*rep.outer_dev) << "\n";
  out << "phase = " << phase_label_name(rep.phase.label) << "\n";
  out << "ambiguous = " << (rep.phase.ambiguous ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < rep.phase.evidence.size(); ++i)
    out << "evidence_" << i << " = " << rep.phase.evidence[i] << "\n";
}

void write_analysis_csv(const std::string& path, const AnalysisReport& rep,
                        const ModelParams& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "epsilon,a,chi,phase,ambiguous,zero_count,zero_radii,winding_loop,"
         "tf_sup_dev,alignment_min,bound_K,outer_dev\n";
  std::ostringstream radii;
  for (std::size_t i = 0; i < rep.zeros.size(); ++i) {
    if (i) radii << ';';
    radii << format_g17(rep.zeros[i].location.norm());
  }
  out << format_g17(p.epsilon) << ',' << format_g17(p.a) << ','
      << format_g17(p.chi) << ',' << phase_label_name(rep.phase.label) << ','
      << (rep.phase.ambiguous ? 1 : 0) << ',' << rep.zeros.size() << ','
      << radii.str() << ','
      << (rep.winding_loop ? std::to_string(*rep.winding_loop) : std::string())
      << ',' << format_g17(rep.tf_sup_dev) << ','
      << format_g17(rep.alignment_min) << ',' << format_g17(rep.bound_K)
      << ',' << (rep.outer_dev ? format_g17(*rep.outer_dev) : std::string())
      << '\n';
}

std::vector<Vec2> marker_list(const AnalysisReport& rep) {
  std::vector<Vec2> m;
  for (const Zero& z : rep.zeros) m.push_back(z.location);
  return m;
}

int run_minimize(const CommonFlags& fl) {
  Config cfg = load_config(fl);
  const ModelParams p = params_from(cfg, 0.05, 0.0);
  const GridSpec grid = grid_from(cfg, p, 257);
  const MinimizeOptions opts = minimize_options_from(cfg);
  const std::string seeds_text = cfg.get_string("seeds", "tf,radial");
  const double amp_tol = cfg.get_double("amp_tol", 0.0);
  const std::string out_dir = cfg.get_string("out", "out");
  const bool do_csv = cfg.get_bool("write_csv", true);
  const bool do_ppm = cfg.get_bool("write_ppm", true);
  cfg.finish();

  const std::vector<SeedKind> seeds = parse_seeds(seeds_text, p);
  std::filesystem::create_directories(out_dir);

  bool have_best = false;
  MinimizeResult best;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    MinimizeResult r = minimize_from_seed(p, grid, seeds[i], opts);
    std::cout << "seed " << seeds[i].describe() << ": energy "
              << format_g17(r.energy) << ", residual "
              << format_g17(r.residual_sup) << ", iters " << r.iters
              << (r.converged ? "" : " (not converged)") << "\n";
    const bool better =
        !have_best ||
        (r.converged && !best.converged) ||
        (r.converged == best.converged && r.energy < best.energy);
    if (better) {
      best = std::move(r);
      best_idx = i;
      have_best = true;
    }
  }

  AnalyzeOptions aopts;
  aopts.amp_tol = amp_tol;
  const AnalysisReport rep = analyze_field(best.field, p, aopts);

  write_field(out_dir + "/field.glnf", best.field);
  if (do_csv) write_field_csv(out_dir + "/field.csv", best.field);
  if (do_ppm)
    write_ppm(out_dir + "/amp.ppm", amplitude_field(best.field),
              marker_list(rep));
  write_report_kv(out_dir + "/report.txt", rep, p,
                  {{"energy", format_g17(best.energy)},
                   {"residual_sup", format_g17(best.residual_sup)},
                   {"iters", std::to_string(best.iters)},
                   {"converged", best.converged ? "true" : "false"},
                   {"seed", seeds[best_idx].describe()}});
  write_analysis_csv(out_dir + "/report.csv", rep, p);

  std::cout << "best: energy " << format_g17(best.energy) << ", residual "
            << format_g17(best.residual_sup) << ", phase "
            << phase_label_name(rep.phase.label) << "\n";
  if (!best.converged) {
    std::cerr << "did not reach tolerance " << opts.residual_tol
              << "; best iterate written to " << out_dir << "/field.glnf\n";
    return 2;
  }
  return 0;
}

int run_radial(const CommonFlags& fl) {
  Config cfg = load_config(fl);
  const ModelParams p = params_from(cfg, 0.05, 0.0);
  const std::string kind = cfg.get_string("kind", "scalar");
  double r_max = cfg.get_double("r_max", 0.0);
  int m = cfg.get_int("m", 0);
  const std::string out_dir = cfg.get_string("out", "out");
  cfg.finish();

  if (r_max <= 0.0) r_max = kind == "vortex" ? 24.0 : p.rho + 3.0;
  if (m <= 0) {
    const double th =
        kind == "vortex" ? 0.0025 : std::min(0.01, p.epsilon / 5.0);
    m = static_cast<int>(
        std::clamp(std::lround(r_max / th) + 1, 2049L, 65537L));
  }
  const RadialGrid rg = RadialGrid::radial(r_max, m);

  std::vector<double> trace;
  RadialProfile prof{};
  try {
    if (kind == "scalar")
      prof = solve_scalar_radial(p, rg, &trace);
    else if (kind == "equivariant")
      prof = solve_equivariant_radial(p, rg, &trace);
    else if (kind == "vortex")
      prof = solve_gl_vortex(rg, &trace);
    else
      throw std::invalid_argument(
          "kind must be scalar, equivariant, or vortex; got '" + kind + "'");
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::filesystem::create_directories(out_dir);
  std::vector<double> r(prof.values.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = prof.grid.r(static_cast<int>(i));
  write_profile_csv(out_dir + "/profile.csv", r, prof.values,
                    {"kind = " + kind,
                     "epsilon = " + format_g17(p.epsilon),
                     "a = " + format_g17(p.a),
                     "chi = " + format_g17(p.chi)});
  std::ofstream tf(out_dir + "/newton_trace.txt");
  for (double v : trace) tf << format_g17(v) << "\n";
  std::cout << "profile written to " << out_dir << "/profile.csv ("
            << trace.size() << " Newton steps)\n";
  return 0;
}

int run_painleve(const CommonFlags& fl) {
  Config cfg = load_config(fl);
  const double alpha = cfg.get_double("alpha", 0.0);
  const std::string branch_s = cfg.get_string("branch", "plus");
  const double S = cfg.get_double("S", 12.0);
  const int m = cfg.get_int("m", 6001);
  const std::string out_dir = cfg.get_string("out", "out");
  cfg.finish();

  P2Branch branch;
  if (branch_s == "plus")
    branch = P2Branch::plus;
  else if (branch_s == "minus")
    branch = P2Branch::minus;
  else
    throw std::invalid_argument("branch must be plus or minus; got '" +
                                branch_s + "'");

  std::vector<double> trace;
  RadialProfile prof{};
  try {
    prof = solve_p2(PainleveSpec::make(alpha, branch, S, m), &trace);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::filesystem::create_directories(out_dir);
  std::vector<double> s(prof.values.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = prof.grid.r(static_cast<int>(i));
  write_profile_csv(out_dir + "/p2.csv", s, prof.values,
                    {"alpha = " + format_g17(alpha), "branch = " + branch_s,
                     "S = " + format_g17(S)});
  const double y0 = prof.value_at(0.0);
  std::cout << "y(0) = " << format_g17(y0) << ", y(-S) = "
            << format_g17(prof.values.front()) << ", y(S) = "
            << format_g17(prof.values.back()) << "\n";
  return 0;
}

int run_analyze(const CommonFlags& fl) {
  Config cfg = load_config(fl);
  const std::string field_path = cfg.get_string("field", "");
  const ModelParams p = params_from(cfg, 0.05, 0.0);
  AnalyzeOptions aopts;
  aopts.amp_tol = cfg.get_double("amp_tol", 0.0);
  aopts.r_frac = cfg.get_double("r_frac", 0.8);
  aopts.winding_radius = cfg.get_double("winding_radius", 0.0);
  aopts.align_in = cfg.get_double("align_in", 0.0);
  aopts.align_out = cfg.get_double("align_out", 0.0);
  aopts.r0 = cfg.get_double("r0", 0.0);
  const std::string out_dir = cfg.get_string("out", "out");
  const bool do_ppm = cfg.get_bool("write_ppm", true);
  cfg.finish();

  if (field_path.empty())
    throw std::invalid_argument("config key 'field' (path to a GLNF1 file) is required");
  const VectorField2 u = read_vector_field(field_path);
  const AnalysisReport rep = analyze_field(u, p, aopts);

  std::filesystem::create_directories(out_dir);
  write_report_kv(out_dir + "/report.txt", rep, p, {});
  write_analysis_csv(out_dir + "/report.csv", rep, p);
  if (do_ppm)
    write_ppm(out_dir + "/amp.ppm", amplitude_field(u), marker_list(rep));
  std::cout << report_to_text(rep, p);
  return 0;
}

int run_sweep(const CommonFlags& fl) {
  Config cfg = load_config(fl);
  SweepSpec spec;
  spec.epsilons = cfg.get_list("epsilons", {});
  spec.b_values = cfg.get_list("b_values", {});
  if (spec.epsilons.empty())
    throw std::invalid_argument("config key 'epsilons' is required");
  if (spec.b_values.empty())
    throw std::invalid_argument("config key 'b_values' is required");
  const std::string scaling = cfg.get_string("scaling", "linear_log");
  if (scaling == "linear_log")
    spec.scaling = SweepScaling::linear_log;
  else if (scaling == "square_log")
    spec.scaling = SweepScaling::square_log;
  else if (scaling == "raw")
    spec.scaling = SweepScaling::raw;
  else
    throw std::invalid_argument(
        "scaling must be linear_log, square_log, or raw; got '" + scaling +
        "'");
  spec.chi = cfg.get_double("chi", 0.5);
  spec.n = cfg.get_int("n", 257);
  spec.half_width = cfg.get_double("L", 0.0);
  spec.continuation = cfg.get_bool("continuation", true);
  spec.minimize = minimize_options_from(cfg);
  const std::string seeds_text = cfg.get_string("seeds", "");
  spec.out_dir = cfg.get_string("out", "sweep_out");
  spec.threads = resolve_threads(fl.threads, cfg);
  cfg.finish();

  if (!seeds_text.empty()) {
    const ModelParams p0 =
        ModelParams::make(spec.epsilons.front(), 0.0, spec.chi);
    spec.seeds = parse_seeds(seeds_text, p0);
  }

  const SweepResult result = gln::run_sweep(spec);
  std::filesystem::create_directories(spec.out_dir);
  write_sweep_csv(result, spec.out_dir + "/sweep.csv");
  write_phase_script(result, spec.out_dir + "/phase_plot.gp");

  int failures = 0;
  for (const SweepRow& r : result.rows)
    if (r.status != "ok") ++failures;
  std::cout << result.rows.size() << " rows written to " << spec.out_dir
            << "/sweep.csv (" << failures << " failed)\n";

  const std::pair<const char*, const char*> pairs[] = {
      {"NoZero", "ShadowVortex"},
      {"ShadowVortex", "StandardVortexCenter"},
      {"ShadowVortex", "StandardVortexOffCenter"},
      {"StandardVortexOffCenter", "StandardVortexCenter"},
      {"NoZero", "StandardVortexCenter"},
  };
  for (double eps : spec.epsilons) {
    for (const auto& [from, to] : pairs) {
      try {
        const Transition tr = transition_estimate(result, eps, from, to);
        std::cout << "eps " << eps << ": " << from << " -> " << to
                  << " near b = " << tr.b
                  << (tr.monotone ? "" : " (non-monotone labels)") << "\n";
      } catch (const std::runtime_error&) {
        // that pair has no transition in range; nothing to report
      }
    }
  }
  return failures == 0 ? 0 : 2;
}

int run_compare(const CommonFlags& fl) {
  Config cfg = load_config(fl);
  const ModelParams p = params_from(cfg, 0.01, 0.0);
  const GridSpec grid = grid_from(cfg, p, 513);
  const std::string field_path = cfg.get_string("field", "");
  const double theta = cfg.get_double("theta", 0.0);
  StripRect rect;
  rect.s1_min = cfg.get_double("s1_min", -3.0);
  rect.s1_max = cfg.get_double("s1_max", 3.0);
  rect.s2_min = cfg.get_double("s2_min", -1.0);
  rect.s2_max = cfg.get_double("s2_max", 1.0);
  const int m1 = cfg.get_int("m1", 241);
  const int m2 = cfg.get_int("m2", 81);
  const double S = cfg.get_double("S", 12.0);
  const int pm = cfg.get_int("m", 6001);
  const MinimizeOptions opts = minimize_options_from(cfg);
  const std::string seeds_text = cfg.get_string("seeds", "tf,radial");
  const std::string out_dir = cfg.get_string("out", "out");
  cfg.finish();

  std::filesystem::create_directories(out_dir);

  VectorField2 u = VectorField2::zeros(grid);
  bool converged = true;
  if (!field_path.empty()) {
    u = read_vector_field(field_path);
  } else {
    const std::vector<SeedKind> seeds = parse_seeds(seeds_text, p);
    bool have = false;
    MinimizeResult best;
    for (const SeedKind& s : seeds) {
      MinimizeResult r = minimize_from_seed(p, u.grid, s, opts);
      const bool better = !have || (r.converged && !best.converged) ||
                          (r.converged == best.converged &&
                           r.energy < best.energy);
      if (better) {
        best = std::move(r);
        have = true;
      }
    }
    converged = best.converged;
    u = std::move(best.field);
  }

  // The stretched boundary-layer frame against the one-dimensional branch.
  const double alpha =
      p.a * p.f_rad(p.rho) / (std::sqrt(2.0) * p.mu1);
  const LayerWindow layer = extract_layer(u, p, theta, rect, m1, m2);
  const RadialProfile y =
      solve_p2(PainleveSpec::make(alpha, P2Branch::plus, S, pm), nullptr);

  double ymax = 0.0;
  for (int j = 0; j < m1; ++j)
    ymax = std::max(ymax, std::abs(y.value_at(layer.s1(j))));
  double w1_dev = 0.0, w2_sup = 0.0;
  for (int i = 0; i < m2; ++i) {
    for (int j = 0; j < m1; ++j) {
      const double yy = y.value_at(layer.s1(j));
      w1_dev = std::max(w1_dev, std::abs(layer.w1[layer.idx(i, j)] - yy));
      w2_sup = std::max(w2_sup, std::abs(layer.w2[layer.idx(i, j)]));
    }
  }

  const int mid = m2 / 2;
  std::ofstream out(out_dir + "/compare.csv", std::ios::binary);
  out << "# alpha = " << format_g17(alpha) << ", theta = " << format_g17(theta)
      << "\n";
  out << "s1,y_1d,w1,w1_minus_y,w2\n";
  for (int j = 0; j < m1; ++j) {
    const double s1 = layer.s1(j);
    const double yy = y.value_at(s1);
    const double w1 = layer.w1[layer.idx(mid, j)];
    const double w2 = layer.w2[layer.idx(mid, j)];
    out << format_g17(s1) << ',' << format_g17(yy) << ',' << format_g17(w1)
        << ',' << format_g17(w1 - yy) << ',' << format_g17(w2) << "\n";
  }

  std::cout << "layer vs one-dimensional branch: sup |w1 - y| = "
            << format_g17(w1_dev) << " (relative "
            << format_g17(ymax > 0 ? w1_dev / ymax : 0.0) << "), sup |w2| = "
            << format_g17(w2_sup) << "\n";

  const AnalysisReport rep = analyze_field(u, p);
  for (const Zero& z : rep.zeros) {
    try {
      bool refl = false;
      const double match =
          core_profile_match(u, z, p, standard_vortex_profile(), &refl);
      std::cout << "core at (" << z.location.x << ", " << z.location.y
                << "): profile match " << format_g17(match)
                << (refl ? " (reflected)" : "") << "\n";
    } catch (const std::exception& e) {
      std::cout << "core at (" << z.location.x << ", " << z.location.y
                << "): " << e.what() << "\n";
    }
  }
  if (!converged) {
    std::cerr << "minimization did not reach tolerance; comparison used the "
                 "best iterate\n";
    return 2;
  }
  return 0;
}

const char* kMinimizeKeys =
    "Config keys (key = value, '#' comments):\n"
    "  epsilon = 0.05        coherence scale, > 0\n"
    "  a = 0                 forcing amplitude, >= 0\n"
    "  chi = 0.5             well offset, in (0, 1)\n"
    "  L = 0                 half width; 0 picks rho + 3\n"
    "  n = 257               grid points per side (>= 16)\n"
    "  max_iters = 50000\n"
    "  tol = 1e-8            residual sup-norm target\n"
    "  step_rule = adaptive_bb   fixed | adaptive_bb | nonlinear_cg\n"
    "  fixed_step = 0        0 picks the stability bound\n"
    "  truncation_bound = 0  0 picks the amplitude-cap default\n"
    "  truncate_every = 50\n"
    "  seeds = tf,radial     tf | radial | vortex:X:Y[:D] | random:N | "
    "file:PATH (X,Y may be rho/-rho)\n"
    "  amp_tol = 0           zero-detection cutoff; 0 picks the default\n"
    "  out = out             output directory\n"
    "  write_csv = true\n"
    "  write_ppm = true\n";

const char* kRadialKeys =
    "Config keys:\n"
    "  epsilon = 0.05, a = 0, chi = 0.5\n"
    "  kind = scalar         scalar | equivariant | vortex\n"
    "  r_max = 0             0 picks rho + 3 (24 for vortex)\n"
    "  m = 0                 0 picks an automatic resolution\n"
    "  out = out\n";

const char* kPainleveKeys =
    "Config keys:\n"
    "  alpha = 0\n"
    "  branch = plus         plus | minus\n"
    "  S = 12                half width of the s interval\n"
    "  m = 6001              grid points\n"
    "  out = out\n";

const char* kAnalyzeKeys =
    "Config keys:\n"
    "  field = (required)    GLNF1 field to analyze\n"
    "  epsilon = 0.05, a = 0, chi = 0.5   parameters the field was made with\n"
    "  amp_tol = 0           0 picks the default\n"
    "  r_frac = 0.8\n"
    "  winding_radius = 0    0 picks rho + 0.3\n"
    "  align_in = 0          0 picks rho + 2 eps^(2/3)\n"
    "  align_out = 0         0 picks rho + 0.4\n"
    "  r0 = 0                far-field ring; 0 picks rho + 0.5\n"
    "  out = out\n"
    "  write_ppm = true\n";

const char* kSweepKeys =
    "Config keys:\n"
    "  epsilons = (required) comma list, each in (0, 1)\n"
    "  b_values = (required) comma list, each >= 0\n"
    "  scaling = linear_log  linear_log (a = b eps |ln eps|) | square_log "
    "(a = b eps |ln eps|^2) | raw (a = b)\n"
    "  chi = 0.5\n"
    "  n = 257\n"
    "  L = 0                 0 picks rho + 3\n"
    "  seeds =               empty picks the default multistart set\n"
    "  continuation = true   warm start along increasing b\n"
    "  max_iters = 50000, tol = 1e-8, step_rule = adaptive_bb,\n"
    "  fixed_step = 0, truncation_bound = 0, truncate_every = 50\n"
    "  threads = 0           0 defers to --threads, then GLNEMATIC_THREADS, "
    "then 1\n"
    "  out = sweep_out\n";

const char* kCompareKeys =
    "Config keys:\n"
    "  epsilon = 0.01, a = 0, chi = 0.5\n"
    "  L = 0, n = 513\n"
    "  field =               GLNF1 field; empty runs a minimization first\n"
    "  seeds = tf,radial     used when field is empty\n"
    "  max_iters = 50000, tol = 1e-8, step_rule = adaptive_bb,\n"
    "  fixed_step = 0, truncation_bound = 0, truncate_every = 50\n"
    "  theta = 0             ray angle of the layer window\n"
    "  s1_min = -3, s1_max = 3, s2_min = -1, s2_max = 1\n"
    "  m1 = 241, m2 = 81     layer window resolution\n"
    "  S = 12, m = 6001      one-dimensional branch resolution\n"
    "  out = out\n";

void add_common(CLI::App* sub, CommonFlags* fl, bool with_threads) {
  sub->add_option("-c,--config", fl->config_path,
                  "Config file (key = value lines)");
  sub->add_option("-s,--set", fl->sets,
                  "Override a config key, e.g. --set epsilon=0.02")
      ->take_all();
  sub->add_option("-o,--out", fl->out, "Output directory (overrides 'out')");
  if (with_threads)
    sub->add_option("-t,--threads", fl->threads,
                    "Worker threads (fallback: GLNEMATIC_THREADS, then 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-component Ginzburg-Landau minimizer in a Gaussian well: "
      "minimization, radial and boundary-layer profiles, defect analysis, "
      "and (eps, a) phase sweeps"};
  app.require_subcommand(1);

  CommonFlags fl_min, fl_rad, fl_p2, fl_an, fl_sw, fl_cmp;
  CLI::App* c_min = app.add_subcommand("minimize", "Minimize the energy on a square grid");
  add_common(c_min, &fl_min, false);
  c_min->footer(kMinimizeKeys);
  CLI::App* c_rad = app.add_subcommand("radial", "Solve a radial profile equation");
  add_common(c_rad, &fl_rad, false);
  c_rad->footer(kRadialKeys);
  CLI::App* c_p2 = app.add_subcommand("painleve", "Solve the one-dimensional layer equation on [-S, S]");
  add_common(c_p2, &fl_p2, false);
  c_p2->footer(kPainleveKeys);
  CLI::App* c_an = app.add_subcommand("analyze", "Analyze a stored field: zeros, winding, regime label");
  add_common(c_an, &fl_an, false);
  c_an->footer(kAnalyzeKeys);
  CLI::App* c_sw = app.add_subcommand("sweep", "Map the (eps, a) plane along a scaling");
  add_common(c_sw, &fl_sw, true);
  c_sw->footer(kSweepKeys);
  CLI::App* c_cmp = app.add_subcommand("compare", "Compare a 2D field against the one-dimensional layer branch");
  add_common(c_cmp, &fl_cmp, false);
  c_cmp->footer(kCompareKeys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version leave with 0; any flag misuse is a plain usage error
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(c_min)) return run_minimize(fl_min);
    if (app.got_subcommand(c_rad)) return run_radial(fl_rad);
    if (app.got_subcommand(c_p2)) return run_painleve(fl_p2);
    if (app.got_subcommand(c_an)) return run_analyze(fl_an);
    if (app.got_subcommand(c_sw)) return run_sweep(fl_sw);
    if (app.got_subcommand(c_cmp)) return run_compare(fl_cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
