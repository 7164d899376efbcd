#include "gln/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gln/energy.hpp"
#include "gln/minimize.hpp"

namespace gln {
namespace {

struct Candidate {
  Vec2 pos{};
  double amp = 0.0;
};

// Bilinear root inside one cell, coordinates (t, s) in [0, 1]^2.
bool refine_cell(const VectorField2& u, int i, int j, Vec2* out) {
  const GridSpec& g = u.grid;
  const double h = g.spacing();
  const double x0 = g.coord(j);
  const double y0 = g.coord(i);
  const double a1 = u.at1(i, j), b1 = u.at1(i, j + 1);
  const double c1 = u.at1(i + 1, j), d1 = u.at1(i + 1, j + 1);
  const double a2 = u.at2(i, j), b2 = u.at2(i, j + 1);
  const double c2 = u.at2(i + 1, j), d2 = u.at2(i + 1, j + 1);
  double t = 0.5, s = 0.5;
  for (int it = 0; it < 40; ++it) {
    const double f1 = a1 * (1 - t) * (1 - s) + b1 * t * (1 - s) +
                      c1 * (1 - t) * s + d1 * t * s;
    const double f2 = a2 * (1 - t) * (1 - s) + b2 * t * (1 - s) +
                      c2 * (1 - t) * s + d2 * t * s;
    const double j11 = (b1 - a1) * (1 - s) + (d1 - c1) * s;
    const double j12 = (c1 - a1) * (1 - t) + (d1 - b1) * t;
    const double j21 = (b2 - a2) * (1 - s) + (d2 - c2) * s;
    const double j22 = (c2 - a2) * (1 - t) + (d2 - b2) * t;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) break;
    const double dt = (f1 * j22 - f2 * j12) / det;
    const double ds = (f2 * j11 - f1 * j21) / det;
    t = std::clamp(t - dt, -0.25, 1.25);
    s = std::clamp(s - ds, -0.25, 1.25);
    if (std::abs(dt) + std::abs(ds) < 1e-14) break;
  }
  if (t < -0.05 || t > 1.05 || s < -0.05 || s > 1.05) return false;
  t = std::clamp(t, 0.0, 1.0);
  s = std::clamp(s, 0.0, 1.0);
  *out = {x0 + t * h, y0 + s * h};
  return true;
}

double loop_clearance(const GridSpec& g, Vec2 c, double r) {
  const double L = g.half_width;
  return L - (std::max(std::abs(c.x), std::abs(c.y)) + r);
}

}  // namespace

std::vector<Zero> find_zeros(const VectorField2& u, double amp_tol) {
  if (!u.finite()) throw std::domain_error("non-finite field");
  if (!(amp_tol > 0.0)) throw std::invalid_argument("amp_tol must be > 0");
  const GridSpec& g = u.grid;
  const int n = g.n;
  const double h = g.spacing();

  std::vector<Candidate> cands;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      double lo1 = u.at1(i, j), hi1 = lo1;
      double lo2 = u.at2(i, j), hi2 = lo2;
      for (int k = 1; k < 4; ++k) {
        const int ii = i + (k >> 1), jj = j + (k & 1);
        lo1 = std::min(lo1, u.at1(ii, jj));
        hi1 = std::max(hi1, u.at1(ii, jj));
        lo2 = std::min(lo2, u.at2(ii, jj));
        hi2 = std::max(hi2, u.at2(ii, jj));
      }
      if (lo1 < 0.0 && hi1 > 0.0 && lo2 < 0.0 && hi2 > 0.0) {
        Vec2 pos{g.coord(j) + 0.5 * h, g.coord(i) + 0.5 * h};
        refine_cell(u, i, j, &pos);
        cands.push_back({pos, u.sample(pos).norm()});
      }
    }
  }

  // Amplitude dips below amp_tol that the sign scan can miss (zero pinned
  // near a node, or a component of one sign across the cell). A dip must be
  // isolated: some node within 5 steps has to rise clearly above it, which
  // keeps uniformly tiny far-field plateaus from reading as zeros.
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = 1; j + 1 < n; ++j) {
      const double amp = u.at(i, j).norm();
      if (amp >= amp_tol) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (u.at(i + di, j + dj).norm() < amp) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      bool isolated = false;
      for (int di = -5; di <= 5 && !isolated; ++di) {
        for (int dj = -5; dj <= 5; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          if (u.at(ii, jj).norm() > amp + 0.25 * amp_tol) {
            isolated = true;
            break;
          }
        }
      }
      if (isolated) cands.push_back({g.node(i, j), amp});
    }
  }

  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.amp != b.amp) return a.amp < b.amp;
                     if (a.pos.x != b.pos.x) return a.pos.x < b.pos.x;
                     return a.pos.y < b.pos.y;
                   });
  const double merge_r2 = (2.0 * h) * (2.0 * h);
  std::vector<Candidate> kept;
  for (const auto& c : cands) {
    bool dup = false;
    for (const auto& k : kept) {
      if ((c.pos - k.pos).norm_sq() <= merge_r2) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(c);
  }

  std::vector<Zero> zeros;
  zeros.reserve(kept.size());
  for (const auto& c : kept) {
    Zero z;
    z.location = c.pos;
    // Lowest amplitude within 3h of the zero, nodes and the refined point.
    z.dip = c.amp;
    {
      const int ci = static_cast<int>(std::lround((c.pos.y + g.half_width) / h));
      const int cj = static_cast<int>(std::lround((c.pos.x + g.half_width) / h));
      for (int di = -3; di <= 3; ++di) {
        for (int dj = -3; dj <= 3; ++dj) {
          const int i = ci + di, j = cj + dj;
          if (i < 0 || j < 0 || i >= n || j >= n) continue;
          const Vec2 d{g.node(i, j).x - c.pos.x, g.node(i, j).y - c.pos.y};
          if (d.norm() > 3.0 * h) continue;
          z.dip = std::min(z.dip, u.at(i, j).norm());
        }
      }
    }
    z.winding = 0;
    for (double r : {4.0 * h, 8.0 * h}) {
      if (loop_clearance(g, c.pos, r) <= 0.0) continue;
      try {
        z.winding = winding_number(u, c.pos, r);
        break;
      } catch (const std::exception&) {
        // retry with the wider loop, else leave 0
      }
    }
    zeros.push_back(z);
  }
  std::stable_sort(zeros.begin(), zeros.end(), [](const Zero& a,
                                                  const Zero& b) {
    const double ra = a.location.norm(), rb = b.location.norm();
    if (ra != rb) return ra < rb;
    const double ta = std::atan2(a.location.y, a.location.x);
    const double tb = std::atan2(b.location.y, b.location.x);
    return ta < tb;
  });
  return zeros;
}

int winding_number(const VectorField2& u, Vec2 center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) ||
      !std::isfinite(center.x) || !std::isfinite(center.y))
    throw std::invalid_argument("winding loop needs a finite center and a positive radius");
  const double h = u.grid.spacing();
  int samples = 256;
  const int want = static_cast<int>(std::ceil(2.0 * M_PI * radius / h)) * 4;
  samples = std::clamp(want, samples, 8192);

  const double two_pi = 2.0 * M_PI;
  Vec2 first{};
  Vec2 prev{};
  double total = 0.0;
  for (int k = 0; k <= samples; ++k) {
    Vec2 v;
    if (k == samples) {
      v = first;
    } else {
      const double th = two_pi * k / samples;
      const Vec2 x{center.x + radius * std::cos(th),
                   center.y + radius * std::sin(th)};
      v = u.sample(x);
      if (v.norm() < 1e-10) {
        std::ostringstream os;
        os << "loop through near-zero amplitude at (x, y) = (" << x.x << ", "
           << x.y << ")";
        throw std::runtime_error(os.str());
      }
    }
    if (k == 0) {
      first = v;
    } else {
      total += std::atan2(prev.x * v.y - prev.y * v.x,
                          prev.x * v.x + prev.y * v.y);
    }
    prev = v;
  }
  const double w_real = total / two_pi;
  const long long w = std::llround(w_real);
  if (std::abs(w_real - static_cast<double>(w)) > 0.05) {
    std::ostringstream os;
    os << "ill-conditioned loop: accumulated angle / 2 pi = " << w_real
       << " is not close to an integer";
    throw std::runtime_error(os.str());
  }
  return static_cast<int>(w);
}

double alignment(const VectorField2& u, double r_in, double r_out) {
  if (!(0.0 < r_in && r_in < r_out))
    throw std::invalid_argument("alignment needs 0 < r_in < r_out");
  const GridSpec& g = u.grid;
  const int n = g.n;
  double best = 2.0;
  bool any = false;
  std::vector<Vec2> dead;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 x = g.node(i, j);
      const double r = x.norm();
      if (r < r_in || r > r_out) continue;
      any = true;
      const Vec2 v = u.at(i, j);
      const double amp = v.norm();
      if (amp == 0.0) {
        if (dead.size() < 5) dead.push_back(x);
        continue;
      }
      best = std::min(best, dot(v, x) / (r * amp));
    }
  }
  if (!any)
    throw std::invalid_argument("alignment annulus contains no grid nodes");
  if (!dead.empty()) {
    std::ostringstream os;
    os << "zero amplitude in alignment annulus at";
    for (const Vec2& x : dead) os << " (" << x.x << ", " << x.y << ")";
    throw std::runtime_error(os.str());
  }
  return best;
}

double tf_deviation(const VectorField2& u, const ModelParams& p,
                    double r_frac) {
  if (!(r_frac > 0.0 && r_frac < 1.0))
    throw std::invalid_argument("r_frac must lie in (0, 1)");
  const GridSpec& g = u.grid;
  const double r2 = (r_frac * p.rho) * (r_frac * p.rho);
  double sup = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Vec2 x = g.node(i, j);
      if (x.norm_sq() > r2) continue;
      const double target = std::sqrt(std::max(0.0, mu_eval(p, x)));
      sup = std::max(sup, std::abs(u.at(i, j).norm() - target));
    }
  }
  return sup;
}

double bound_constant(const VectorField2& u, const ModelParams& p) {
  const GridSpec& g = u.grid;
  const double shift = std::cbrt(p.epsilon);
  double sup = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double mp = std::max(0.0, mu_eval(p, g.node(i, j)));
      sup = std::max(sup, u.at(i, j).norm() / (std::sqrt(mp) + shift));
    }
  }
  return sup;
}

std::optional<double> outer_check(const VectorField2& u, const ModelParams& p,
                                  double r0) {
  if (!(r0 > p.rho + 0.2) || !(r0 < u.grid.half_width))
    throw std::invalid_argument(
        "outer ring radius must lie in (rho + 0.2, half_width)");
  if (p.a == 0.0) return std::nullopt;
  const double mur = p.mu_rad(r0);
  if (!(mur < 0.0))
    throw std::invalid_argument("outer ring must lie where mu < 0");
  const double scale = p.a * p.f_rad(r0) / (-mur);
  const int nth = 720;
  double sup = 0.0;
  for (int k = 0; k < nth; ++k) {
    const double th = 2.0 * M_PI * k / nth;
    const Vec2 x{r0 * std::cos(th), r0 * std::sin(th)};
    const Vec2 v = u.sample(x);
    const Vec2 f = f_eval(p, x);
    const Vec2 dev{v.x / p.epsilon + (p.a / mur) * f.x,
                   v.y / p.epsilon + (p.a / mur) * f.y};
    sup = std::max(sup, dev.norm());
  }
  return sup / scale;
}

double core_profile_match(const VectorField2& u, const Zero& z,
                          const ModelParams& p, const RadialProfile& eta,
                          bool* reflected) {
  const Vec2 l = z.location;
  const double mul = mu_eval(p, l);
  if (!(mul > 0.1)) {
    std::ostringstream os;
    os << "core outside validity region (mu = " << mul << " at (" << l.x
       << ", " << l.y << "))";
    throw std::domain_error(os.str());
  }
  const double sm = std::sqrt(mul);
  const double L = u.grid.half_width;

  // Raster of stretched offsets s, |s| <= 5; the model is the rescaled unit
  // vortex, the fit is over rotations and reflections jointly.
  std::vector<Vec2> us, as;
  const int half = 20;
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      const Vec2 s{j * 5.0 / half, i * 5.0 / half};
      const double r = s.norm();
      if (r > 5.0) continue;
      const Vec2 x{l.x + p.epsilon * s.x, l.y + p.epsilon * s.y};
      if (std::max(std::abs(x.x), std::abs(x.y)) >= L) continue;
      Vec2 a{0.0, 0.0};
      if (r > 1e-14) {
        const double amp = sm * eta.value_at_clamped(sm * r);
        a = {amp * s.x / r, amp * s.y / r};
      }
      us.push_back(u.sample(x));
      as.push_back(a);
    }
  }

  double denom = 0.0, unorm = 0.0;
  for (std::size_t k = 0; k < as.size(); ++k) {
    denom += as[k].norm_sq();
    unorm += us[k].norm_sq();
  }
  if (denom < 1e-300) throw std::runtime_error("degenerate core model");

  double best = HUGE_VAL;
  bool best_ref = false;
  for (int ref = 0; ref < 2; ++ref) {
    double cdot = 0.0, ccross = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) {
      const Vec2 c = ref ? Vec2{as[k].x, -as[k].y} : as[k];
      cdot += c.x * us[k].x + c.y * us[k].y;
      ccross += c.x * us[k].y - c.y * us[k].x;
    }
    const double gain = std::sqrt(cdot * cdot + ccross * ccross);
    const double mis2 = std::max(0.0, unorm + denom - 2.0 * gain);
    const double match = std::sqrt(mis2 / denom);
    if (match < best) {
      best = match;
      best_ref = (ref == 1);
    }
  }
  if (reflected) *reflected = best_ref;
  return best;
}

double core_profile_match(const VectorField2& u, const Zero& z,
                          const ModelParams& p) {
  return core_profile_match(u, z, p, standard_vortex_profile(), nullptr);
}

std::string phase_label_name(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::no_zero:
      return "NoZero";
    case PhaseLabel::shadow_vortex:
      return "ShadowVortex";
    case PhaseLabel::standard_vortex_off_center:
      return "StandardVortexOffCenter";
    case PhaseLabel::standard_vortex_center:
      return "StandardVortexCenter";
  }
  return "?";
}

Phase classify(const VectorField2& u, const std::vector<Zero>& zeros,
               const ModelParams& p) {
  Phase ph;
  std::ostringstream ev;

  if (zeros.empty()) {
    ph.label = PhaseLabel::no_zero;
    ph.evidence.push_back("no zeros detected");
    return ph;
  }

  const double rho = p.rho;
  const double shadow_band = rho - 0.15;
  const double center_band = 0.2 * rho;
  const double mu0_amp = 0.5 * std::sqrt(1.0 - p.chi);
  const GridSpec& g = u.grid;

  struct ZInfo {
    double r;
    int w;
    double match;
    bool match_ok;
    double ball_amp;
  };
  std::vector<ZInfo> info;
  for (const Zero& z : zeros) {
    ZInfo zi{};
    zi.r = z.location.norm();
    zi.w = z.winding;
    zi.match_ok = false;
    zi.match = HUGE_VAL;
    try {
      zi.match = core_profile_match(u, z, p);
      zi.match_ok = true;
    } catch (const std::exception&) {
    }
    // Amplitude over |x - location| <= 3 eps, from nodes when the ball holds
    // any, else from a sampled raster.
    const double rb = 3.0 * p.epsilon;
    double ball = 0.0;
    bool hit = false;
    const double h = g.spacing();
    const int i0 = std::max(0, static_cast<int>((z.location.y + g.half_width - rb) / h) - 1);
    const int i1 = std::min(g.n - 1, static_cast<int>((z.location.y + g.half_width + rb) / h) + 1);
    const int j0 = std::max(0, static_cast<int>((z.location.x + g.half_width - rb) / h) - 1);
    const int j1 = std::min(g.n - 1, static_cast<int>((z.location.x + g.half_width + rb) / h) + 1);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        if ((g.node(i, j) - z.location).norm() > rb) continue;
        ball = std::max(ball, u.at(i, j).norm());
        hit = true;
      }
    }
    if (!hit) {
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
          const Vec2 d{j * rb / 2.0, i * rb / 2.0};
          if (d.norm() > rb) continue;
          const Vec2 x = z.location + d;
          if (std::max(std::abs(x.x), std::abs(x.y)) >= g.half_width) continue;
          ball = std::max(ball, u.sample(x).norm());
        }
    }
    zi.ball_amp = ball;
    info.push_back(zi);

    ev.str("");
    ev << "zero at (" << z.location.x << ", " << z.location.y
       << "): radius " << zi.r << ", winding " << zi.w << ", core match ";
    if (zi.match_ok)
      ev << zi.match;
    else
      ev << "n/a";
    ev << ", amplitude within 3 eps " << zi.ball_amp;
    ph.evidence.push_back(ev.str());
  }

  bool center_fired = false, off_fired = false;
  for (const ZInfo& zi : info) {
    if (std::abs(zi.w) == 1 && zi.match_ok && zi.match <= 0.2) {
      if (zi.r <= center_band) center_fired = true;
      if (zi.r > center_band && zi.r < shadow_band) off_fired = true;
    }
  }
  bool shadow_fired = true;
  for (const ZInfo& zi : info) {
    if (zi.r < shadow_band || zi.ball_amp > mu0_amp) {
      shadow_fired = false;
      break;
    }
  }

  int fired = (center_fired ? 1 : 0) + (off_fired ? 1 : 0) +
              (shadow_fired ? 1 : 0);
  if (center_fired) {
    ph.label = PhaseLabel::standard_vortex_center;
    ph.evidence.push_back("rule fired: unit-winding zero near the origin with a matching core");
  } else if (off_fired) {
    ph.label = PhaseLabel::standard_vortex_off_center;
    ph.evidence.push_back("rule fired: unit-winding zero strictly inside the disc, away from the origin");
  } else if (shadow_fired) {
    ph.label = PhaseLabel::shadow_vortex;
    ph.evidence.push_back("rule fired: all zeros sit at the rim with suppressed core amplitude");
  } else {
    // Zeros exist but no quantitative rule matched; fall back to locations.
    double rmin = HUGE_VAL, rmax = 0.0;
    for (const ZInfo& zi : info) {
      rmin = std::min(rmin, zi.r);
      rmax = std::max(rmax, zi.r);
    }
    if (rmin >= shadow_band)
      ph.label = PhaseLabel::shadow_vortex;
    else if (rmin <= center_band)
      ph.label = PhaseLabel::standard_vortex_center;
    else
      ph.label = PhaseLabel::standard_vortex_off_center;
    ph.ambiguous = true;
    ph.evidence.push_back(
        "no rule matched cleanly; label chosen from zero locations only");
    return ph;
  }
  ph.ambiguous = fired >= 2;
  if (ph.ambiguous)
    ph.evidence.push_back("multiple rules fired; highest precedence kept");
  return ph;
}

AnalysisReport analyze_field(const VectorField2& u, const ModelParams& p,
                             const AnalyzeOptions& opts) {
  AnalysisReport rep;
  const double L = u.grid.half_width;
  const double eps23 = std::cbrt(p.epsilon * p.epsilon);

  const double amp_tol = opts.amp_tol > 0.0 ? opts.amp_tol
                                            : default_amp_tol(p);
  rep.zeros = find_zeros(u, amp_tol);

  const double wr = opts.winding_radius > 0.0 ? opts.winding_radius
                                              : p.rho + 0.3;
  if (wr < L) {
    try {
      rep.winding_loop = winding_number(u, {0.0, 0.0}, wr);
    } catch (const std::exception& e) {
      rep.winding_note = e.what();
    }
  } else {
    rep.winding_note = "loop radius exceeds the grid";
  }

  rep.tf_sup_dev = tf_deviation(u, p, opts.r_frac);

  double ain = opts.align_in > 0.0 ? opts.align_in : p.rho + 2.0 * eps23;
  double aout = opts.align_out > 0.0 ? opts.align_out : p.rho + 0.4;
  aout = std::min(aout, L - 2.0 * u.grid.spacing());
  try {
    rep.alignment_min = alignment(u, ain, aout);
  } catch (const std::exception&) {
    rep.alignment_min = std::numeric_limits<double>::quiet_NaN();
  }

  rep.bound_K = bound_constant(u, p);

  const double r0 = opts.r0 > 0.0 ? opts.r0 : p.rho + 0.5;
  if (r0 > p.rho + 0.2 && r0 < L) rep.outer_dev = outer_check(u, p, r0);

  rep.phase = classify(u, rep.zeros, p);
  return rep;
}

std::string report_to_text(const AnalysisReport& rep, const ModelParams& p) {
  std::ostringstream os;
  os << "eps = " << p.epsilon << ", a = " << p.a << ", chi = " << p.chi
     << ", rho = " << p.rho << "\n";
  os << "zeros: " << rep.zeros.size() << "\n";
  for (const Zero& z : rep.zeros) {
    os << "  (" << z.location.x << ", " << z.location.y << ")  radius "
       << z.location.norm() << "  winding " << z.winding << "  dip " << z.dip
       << "\n";
  }
  if (rep.winding_loop)
    os << "winding on the reference loop: " << *rep.winding_loop << "\n";
  else
    os << "winding on the reference loop: n/a (" << rep.winding_note << ")\n";
  os << "bulk amplitude deviation (sup): " << rep.tf_sup_dev << "\n";
  os << "rim alignment (min cosine): " << rep.alignment_min << "\n";
  os << "amplitude bound constant: " << rep.bound_K << "\n";
  if (rep.outer_dev)
    os << "far-field deviation (relative sup): " << *rep.outer_dev << "\n";
  os << "phase: " << phase_label_name(rep.phase.label)
     << (rep.phase.ambiguous ? " (ambiguous)" : "") << "\n";
  for (const auto& e : rep.phase.evidence) os << "  - " << e << "\n";
  return os.str();
}

}  // namespace gln
