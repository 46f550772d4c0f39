#include "resbif/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "resbif/branch.hpp"
#include "resbif/error.hpp"
#include "resbif/glue.hpp"
#include "resbif/kernels.hpp"
#include "resbif/oracle.hpp"

namespace resbif::validate {

namespace {

constexpr double kPi = std::numbers::pi;

Check make(std::string target, double observed, double tolerance, bool passed, std::string detail = {}) {
  Check c;
  c.target = std::move(target);
  c.observed = observed;
  c.tolerance = tolerance;
  c.passed = passed && std::isfinite(observed);
  c.detail = std::move(detail);
  return c;
}

std::string f6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference specs.
PotentialSpec well2() { return PotentialSpec::square_well(2.0, 1.0); }
PotentialSpec threshold_well() { return PotentialSpec::square_well(kPi * kPi / 4.0, 1.0); }
PotentialSpec barrier() { return PotentialSpec::square_well(-1.0, 0.5); }
PotentialSpec transmission_well() { return PotentialSpec::square_well(3.0, 1.0); }

ShootOptions shoot_opts(const Options& o) { return ShootOptions{o.tol}; }

BranchControls controls(const Options& o) {
  BranchControls c;
  c.shoot = shoot_opts(o);
  return c;
}

// Branches shared by several checks, traced once per tolerance setting.
struct BranchSet {
  std::vector<std::pair<std::string, BranchCurve>> curves;
  PotentialSpec spec_of(const std::string& id) const {
    if (id.rfind("bound", 0) == 0) return well2();
    if (id.rfind("anti", 0) == 0) return barrier();
    if (id.rfind("trans", 0) == 0) return transmission_well();
    return threshold_well();
  }
};

const BranchSet& branches(const Options& o) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, BranchSet> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_pair(o.tol.rtol, o.tol.atol);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  BranchSet set;
  const BranchControls c = controls(o);
  const SpectrumOptions so{o.tol};
  for (const auto& p : scan_axis(well2(), Target::W, 0.01, 6.0, 400, so))
    set.curves.emplace_back("bound", trace_branch(well2(), p, c));
  int i = 0;
  for (const auto& p : scan_axis(barrier(), Target::W, -6.0, -0.01, 400, so))
    set.curves.emplace_back("anti" + std::to_string(i++), trace_branch(barrier(), p, c));
  i = 0;
  for (const auto& p : scan_axis(transmission_well(), Target::SMinus, -6.0, 6.0, 600, so))
    if (std::abs(p.kappa()) > 1e-3) set.curves.emplace_back("trans" + std::to_string(i++), trace_branch(transmission_well(), p, c));
  BranchControls tc = c;
  tc.eps_max = 1e-2;
  set.curves.emplace_back("threshold", threshold_branch(threshold_well(), Parity::Odd, tc));
  return cache.emplace(key, std::move(set)).first->second;
}

const BranchCurve& find_curve(const BranchSet& set, const std::string& id) {
  for (const auto& [name, curve] : set.curves)
    if (name == id) return curve;
  throw Error(ErrorKind::Config, "no branch " + id);
}

// ---- scattering ----

Check unitarity(const Options& o) {
  const auto spec = well2();
  std::vector<cplx> ks;
  for (int i = 0; i < 50; ++i) ks.emplace_back(0.1 + 9.9 * i / 49.0, 0.0);
  const auto rows = kernels::scatter_parallel(spec, ks, ScatteringOptions{o.tol}, o.jobs);
  double dev = 0.0;
  for (const auto& d : rows) dev = std::max(dev, std::abs(std::norm(d.r_minus) + std::norm(d.t) - 1.0));
  return make("max ||r-|^2+|t|^2-1| over 50 k in [0.1,10]", dev, 1e-8, dev < 1e-8);
}

Check squarewell_grid(const Options& o) {
  const double alpha = 2.0, b = 1.0;
  const auto spec = PotentialSpec::square_well(alpha, b);
  std::vector<cplx> ks;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) ks.emplace_back(-5.0 + 0.5 * i, -5.0 + 0.5 * j);
  const auto rows = kernels::scatter_parallel(spec, ks, ScatteringOptions{o.tol}, o.jobs);
  double err = 0.0;
  for (std::size_t n = 0; n < ks.size(); ++n) {
    const auto ref = oracle::squarewell_scattering(alpha, b, ks[n]);
    const double sw = std::abs(ref.w) + 1e-300, ss = std::abs(ref.s_minus) + std::abs(ref.w);
    err = std::max({err, std::abs(rows[n].w - ref.w) / sw, std::abs(rows[n].s_minus - ref.s_minus) / ss,
                    std::abs(rows[n].s_plus - ref.s_plus) / ss});
  }
  return make("relative error vs closed form, 21x21 grid in [-5,5]^2", err, 1e-8, err < 1e-8);
}

Check zero_potential(const Options& o) {
  const auto spec = PotentialSpec::zero();
  double dev = 0.0;
  for (double k : {0.3, 1.0, 4.0}) {
    const auto d = scattering_data(spec, cplx(k, 0.0), ScatteringOptions{o.tol});
    dev = std::max({dev, std::abs(d.t - 1.0), std::abs(d.s_minus)});
  }
  return make("V = 0: t = 1, s- = 0", dev, 1e-10, dev < 1e-10);
}

Check serial_parallel(const Options& o) {
  const auto spec = PotentialSpec::smooth_well(10.0, 0.3);
  std::vector<cplx> ks;
  for (int i = 0; i < 64; ++i) ks.emplace_back(-3.0 + 0.1 * i, -0.5 + 0.02 * i);
  const auto a = kernels::target_serial(spec, Target::W, ks, o.tol);
  const auto b = kernels::target_parallel(spec, Target::W, ks, o.tol, o.jobs);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i].value - b[i].value));
  return make("serial and OpenMP kernels bit-identical", diff, 0.0, diff == 0.0);
}

// ---- threshold ----

Check threshold_detection(const Options& o) {
  const auto p = detect_threshold(threshold_well(), SpectrumOptions{o.tol});
  if (!p) return make("|w(0)| below tolerance, Odd mode", NAN, 1e-6, false, "no threshold found");
  const double r = p->residual / p->scale;
  return make("|w(0)| below tolerance, Odd mode", r, 1e-6, r < 1e-6 && p->parity == Parity::Odd,
              std::string("parity ") + to_string(p->parity));
}

Check threshold_x_R(const Options& o) {
  const auto& c = find_curve(branches(o), "threshold");
  if (c.points.size() < 2) return make("extrapolated x_R(0) = 0.75", NAN, 1e-3, false, "branch too short");
  // x_R(eps) = x_R(0) + c eps + ...: Richardson on the points nearest 1e-3 and 1e-2.
  auto nearest = [&](double eps) {
    const GluedState* best = &c.points.front();
    for (const auto& g : c.points)
      if (std::abs(std::log(g.eps / eps)) < std::abs(std::log(best->eps / eps))) best = &g;
    return best;
  };
  const GluedState* a = nearest(1e-3);
  const GluedState* b = nearest(1e-2);
  const double x0 = (b->eps * a->x_R - a->eps * b->x_R) / (b->eps - a->eps);
  double sym = 0.0;
  for (const auto& g : c.points) sym = std::max(sym, std::abs(g.x_R + g.x_L));
  return make("extrapolated x_R(0) = 0.75", std::abs(x0 - 0.75), 1e-3, std::abs(x0 - 0.75) < 1e-3 && sym < 1e-9,
              "x_R(0) " + f6(x0) + ", max |x_R + x_L| " + f6(sym));
}

Check threshold_slope(const Options& o) {
  const auto& c = find_curve(branches(o), "threshold");
  if (c.points.size() < 2) return make("E/eps -> -2/pi^2", NAN, 1e-2, false, "branch too short");
  const auto& g0 = c.points[0];
  const auto& g1 = c.points[1];
  const double slope = (g1.E - g0.E) / (g1.eps - g0.eps);
  const double target = -2.0 / (kPi * kPi);
  return make("dE/deps at 0 = -2/pi^2", rel(slope, target), 1e-2, rel(slope, target) < 1e-2, "slope " + f6(slope));
}

Check alpha_star(const Options& o) {
  const auto family = PotentialSpec::smooth_well(24.0, -11.0);
  const double a = bisect_threshold_alpha(family, 20.0, 28.0);
  const auto p = detect_threshold(family.with_alpha(a), SpectrumOptions{o.tol});
  const double err = std::abs(a - 24.04031);
  return make("smooth well beta=-11: alpha* = 24.04031", err, 1e-3, err < 1e-3 && p.has_value(), "alpha* " + f6(a));
}

// ---- nlsolve ----

Check dF_dkappa(const Options& o) {
  const auto spec = well2();
  const auto pts = scan_axis(spec, Target::W, 0.01, 6.0, 400, SpectrumOptions{o.tol});
  if (pts.empty()) return make("closed-form dF/dkappa vs central difference", NAN, 1e-4, false, "no bound state");
  const auto p = mode_and_nondegeneracy(spec, pts.front(), o.tol);
  const BCSignature sig = signature_for(Target::W, p.kappa());
  const double h = 1e-5;
  const double fd = (shoot(spec, p.kappa() + h, 0.0, sig, shoot_opts(o)).residual_F -
                     shoot(spec, p.kappa() - h, 0.0, sig, shoot_opts(o)).residual_F) /
                    (2.0 * h);
  const double formula = dF_dkappa_formula(p);
  return make("closed-form dF/dkappa vs central difference", rel(formula, fd), 1e-4, rel(formula, fd) < 1e-4,
              "formula " + f6(formula) + ", fd " + f6(fd));
}

Check threshold_even_odd_ic(const Options& o) {
  // Linear threshold mode of the critical well is sin(pi x / 2) inside, so U(b) = 2/pi.
  const auto s = shoot_threshold(threshold_well(), 0.0, 0.0, Parity::Odd, shoot_opts(o));
  const double err = std::abs(s.u_right() - 2.0 / kPi);
  return make("odd threshold mode U(b) = 2/pi", err, 1e-9, err < 1e-9);
}

// ---- branch ----

Check bound_bifurcation(const Options& o) {
  const auto& c = find_curve(branches(o), "bound");
  if (c.points.empty()) return make("N(1e-6) < 1e-4, |E + kappa*^2| < 1e-4", NAN, 1e-4, false, c.message);
  const auto& g = c.points.front();
  const double k = c.seed.kappa();
  const double dE = std::abs(g.E + k * k);
  return make("N(1e-6) < 1e-4, |E + kappa*^2| < 1e-4", std::max(g.N, dE), 1e-4, g.N < 1e-4 && dE < 1e-4,
              "N " + f6(g.N) + ", E + kappa^2 " + f6(g.E + k * k));
}

Check antibound_mass(const Options& o) {
  double worst = 0.0;
  std::string detail;
  int n = 0;
  for (const auto& [id, c] : branches(o).curves) {
    if (id.rfind("anti", 0) != 0 || c.points.empty()) continue;
    const double target = 8.0 * std::abs(c.seed.kappa());
    worst = std::max(worst, rel(c.points.front().N, target));
    detail += "N " + f6(c.points.front().N) + " vs " + f6(target) + "; ";
    ++n;
  }
  return make("N(eps -> 0) = 8|kappa_r|", n ? worst : NAN, 2e-2, n > 0 && worst < 2e-2, detail);
}

Check transmission_mass(const Options& o) {
  double worst = 0.0;
  std::string detail;
  int n = 0;
  for (const auto& [id, c] : branches(o).curves) {
    if (id.rfind("trans", 0) != 0 || c.points.empty()) continue;
    const double target = 4.0 * std::abs(c.seed.kappa());
    worst = std::max(worst, rel(c.points.front().N, target));
    detail += "N " + f6(c.points.front().N) + " vs " + f6(target) + "; ";
    ++n;
  }
  return make("N(eps -> 0) = 4|kappa_t|", n ? worst : NAN, 2e-2, n > 0 && worst < 2e-2, detail);
}

Check drift_law(const Options& o) {
  double worst = 0.0;
  std::string detail;
  int n = 0;
  for (const auto& [id, c] : branches(o).curves) {
    if (id.rfind("anti", 0) != 0) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& g : c.points) {
      if (g.eps > 1e-3 * (1.0 + 1e-9)) continue;
      const double L = std::log(1.0 / g.eps);
      sx += L;
      sy += g.x_R;
      sxx += L * L;
      sxy += L * g.x_R;
      ++m;
    }
    if (m < 3) continue;
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double target = -1.0 / (2.0 * c.seed.kappa());
    worst = std::max(worst, rel(slope, target));
    detail += "slope " + f6(slope) + " vs " + f6(target) + "; ";
    ++n;
  }
  return make("d x_R / d ln(1/eps) = -1/(2 kappa*)", n ? worst : NAN, 2e-2, n > 0 && worst < 2e-2, detail);
}

Check no_go(const Options& o) {
  const auto spec = barrier();
  const SpectrumOptions so{o.tol};
  const auto bound = scan_axis(spec, Target::W, 0.01, 6.0, 400, so);
  const auto thr = detect_threshold(spec, so);
  if (!bound.empty() || thr) return make("E < -1e-3 and N > 0.1 on every branch", NAN, 0.1, false, "spec has a bound state or threshold");
  double e_max = -INFINITY, n_min = INFINITY;
  int count = 0;
  const BranchControls c = controls(o);
  for (Target t : {Target::W, Target::SMinus, Target::SPlus})
    for (const auto& p : scan_axis(spec, t, -6.0, 6.0, 600, so)) {
      if (std::abs(p.kappa()) < 1e-3) continue;
      const auto curve = trace_branch(spec, p, c);
      for (const auto& g : curve.points) {
        e_max = std::max(e_max, g.E);
        n_min = std::min(n_min, g.N);
        ++count;
      }
    }
  return make("E < -1e-3 and N > 0.1 on every branch", n_min, 0.1, count > 0 && e_max < -1e-3 && n_min > 0.1,
              std::to_string(count) + " states, max E " + f6(e_max) + ", min N " + f6(n_min));
}

Check residual_ode(const Options& o) {
  const auto& set = branches(o);
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& [id, c] : set.curves) {
    const auto spec = set.spec_of(id);
    for (const auto& g : c.points) {
      worst = std::max(worst, global_residual(spec, g).relative());
      ++n;
    }
  }
  return make("ODE re-insertion residual / amplitude", worst, 1e-6, n > 0 && worst < 1e-6,
              std::to_string(n) + " states");
}

Check residual_jumps(const Options& o) {
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& [id, c] : branches(o).curves)
    for (const auto& g : c.points) {
      worst = std::max(worst, g.residuals.max());
      ++n;
    }
  return make("jump residuals at +-b", worst, 1e-9, n > 0 && worst < 1e-9, std::to_string(n) + " states");
}

// ---- delta ----

Check delta_limits(const Options&) {
  double worst = 0.0;
  std::string detail;
  for (double alpha : {1.0, -1.0}) {
    const double E = oracle::delta_threshold_energy(alpha) - 1e-12;
    const double N = oracle::delta_state(alpha, E).N;
    const double limit = oracle::delta_threshold_mass(alpha);
    const double expected = alpha > 0 ? 4.0 : 0.0;
    worst = std::max({worst, std::abs(N - limit), std::abs(limit - expected)});
    detail += "alpha " + f6(alpha) + ": N " + f6(N) + "; ";
  }
  return make("N -> 4 (barrier), 0 (well)", worst, 1e-6, worst < 1e-6, detail);
}

Check delta_glue_mass(const Options&) {
  double worst = 0.0;
  for (double alpha : {1.0, -1.0, 2.5})
    for (double E : {-0.3, -1.0, -4.0, -9.0}) {
      if (!(E < oracle::delta_threshold_energy(alpha))) continue;
      const auto st = oracle::delta_state(alpha, E);
      const double psi0 = soliton(-st.x_R, E);
      const auto right = match_boundary(0.0, psi0, soliton_derivative(-st.x_R, E), E, GlueSide::Right);
      const auto left = match_boundary(0.0, psi0, soliton_derivative(-st.x_L, E), E, GlueSide::Left);
      const double N = glued_mass(E, 0.0, 0.0, 0.0, left.center, right.center);
      worst = std::max(worst, std::abs(N - st.N));
    }
  return make("glued N from delta boundary data = closed-form N", worst, 1e-8, worst < 1e-8);
}

Check delta_jump(const Options&) {
  double worst = 0.0;
  for (double alpha : {1.0, -1.0})
    for (double E : {-0.5, -1.0, -3.0}) {
      const auto st = oracle::delta_state(alpha, E);
      const double jump = soliton_derivative(-st.x_R, E) - soliton_derivative(-st.x_L, E);
      worst = std::max(worst, std::abs(jump - alpha * soliton(-st.x_R, E)));
    }
  return make("psi'(0+) - psi'(0-) = alpha psi(0)", worst, 1e-10, worst < 1e-10);
}

Check delta_x_R(const Options&) {
  const double x = oracle::delta_state(1.0, -1.0).x_R;
  const double xw = oracle::delta_state(-1.0, -1.0).x_R;
  const double err = std::max(std::abs(x - 0.5493061443340549), std::abs(xw + 0.5493061443340549));
  return make("alpha = +-1, E = -1: x_R = +-artanh(1/2)", err, 1e-12, err < 1e-12);
}

// ---- soliton ----

Check soliton_mass(const Options&) {
  double worst = 0.0;
  for (double E : {-1.0, -4.0, -0.25}) {
    const double a = std::sqrt(-E);
    const double L = 40.0 / a;
    const int n = 20000;
    const double h = 2.0 * L / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double v = soliton(-L + i * h, E);
      s += w * v * v;
    }
    s *= h / 3.0;
    worst = std::max(worst, std::abs(s - oracle::soliton_facts(E).mass));
  }
  return make("quadrature of S^2 = 4 sqrt(-E)", worst, 1e-10, worst < 1e-10);
}

// ---- coalesce ----

Check coalescence(const Options& o) {
  CoalescenceOptions co;
  co.with_branches = true;
  co.controls = controls(o);
  co.spectrum = SpectrumOptions{o.tol};
  std::vector<double> heights;
  for (int i = 0; i <= 6; ++i) heights.push_back(1.0 + 0.25 * i);
  const auto rep = coalescence_scan([](double h) { return PotentialSpec::square_well(-h, 0.5); }, heights, co);
  const bool ok = rep.bracket && rep.box_count_conserved && rep.before.size() == 2 && rep.after &&
                  !rep.after->points.empty();
  std::string detail = rep.bracket ? "merge in [" + f6(rep.bracket->first) + ", " + f6(rep.bracket->second) + "]"
                                   : "no merge found";
  if (rep.after) detail += ", after-branch points " + std::to_string(rep.after->points.size());
  return make("two anti-bound zeros merge; box count conserved", rep.bracket ? 1.0 : 0.0, 0.0, ok, detail);
}

}  // namespace

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"scattering", "unitarity", unitarity},
      {"scattering", "squarewell_grid", squarewell_grid},
      {"scattering", "zero_potential", zero_potential},
      {"scattering", "serial_parallel", serial_parallel},
      {"threshold", "threshold_detection", threshold_detection},
      {"threshold", "threshold_x_R_limit", threshold_x_R},
      {"threshold", "threshold_energy_slope", threshold_slope},
      {"threshold", "alpha_star", alpha_star},
      {"nlsolve", "dF_dkappa_formula", dF_dkappa},
      {"nlsolve", "threshold_mode_boundary", threshold_even_odd_ic},
      {"branch", "bound_state_bifurcation", bound_bifurcation},
      {"branch", "antibound_mass_threshold", antibound_mass},
      {"branch", "transmission_mass_threshold", transmission_mass},
      {"branch", "drift_law", drift_law},
      {"branch", "no_go_barrier", no_go},
      {"branch", "global_residual_ode", residual_ode},
      {"branch", "global_residual_jumps", residual_jumps},
      {"delta", "delta_mass_limits", delta_limits},
      {"delta", "delta_glue_mass", delta_glue_mass},
      {"delta", "delta_jump_condition", delta_jump},
      {"delta", "delta_x_R", delta_x_R},
      {"soliton", "soliton_mass", soliton_mass},
      {"coalesce", "coalescence", coalescence},
  };
  return entries;
}

std::vector<std::string> groups() {
  std::vector<std::string> out;
  for (const auto& e : registry())
    if (std::find(out.begin(), out.end(), e.group) == out.end()) out.push_back(e.group);
  return out;
}

Check run_one(const Entry& entry, const Options& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = entry.run(opts);
  } catch (const std::exception& e) {
    c = make("", NAN, 0.0, false, e.what());
  }
  c.group = entry.group;
  c.name = entry.name;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::vector<Check> run(const Options& opts) {
  for (const auto& g : opts.only) {
    const auto all = groups();
    if (std::find(all.begin(), all.end(), g) == all.end()) throw Error(ErrorKind::Config, "unknown group " + g);
  }
  std::vector<Check> out;
  for (const auto& e : registry()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), e.group) == opts.only.end()) continue;
    out.push_back(run_one(e, opts));
  }
  return out;
}

std::string table(const std::vector<Check>& checks) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-10s %-28s %-52s %-14s %-10s %-6s %s\n", "group", "check", "target", "observed",
                "tolerance", "status", "detail");
  out += buf;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-10s %-28s %-52s %-14.6g %-10.3g %-6s %s\n", c.group.c_str(), c.name.c_str(),
                  c.target.c_str(), c.observed, c.tolerance, c.passed ? "PASS" : "FAIL", c.detail.c_str());
    out += buf;
  }
  return out;
}

}  // namespace resbif::validate
