#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "resbif/branch.hpp"
#include "resbif/error.hpp"
#include "resbif/kernels.hpp"
#include "resbif/report.hpp"
#include "resbif/validate.hpp"

namespace fs = std::filesystem;
using namespace resbif;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIntegration = 3;

struct RunConfig {
  std::string potential_file;
  std::string potential_inline;
  std::string out = ".";
  int jobs = 0;
  std::vector<std::string> tol_overrides;
};

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, std::string("bad number in ") + what + ": " + item);
    }
  }
  if (out.size() != expected) throw Error(ErrorKind::Config, std::string("expected ") + std::to_string(expected) +
                                                                 " fields in " + what + ": " + text);
  return out;
}

int count_field(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v)) throw Error(ErrorKind::Config, std::string(what) + " count must be a positive integer");
  return static_cast<int>(v);
}

ode::Tolerance tolerances(const RunConfig& cfg) {
  ode::Tolerance tol;
  for (const auto& item : cfg.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "--tol expects NAME=VALUE: " + item);
    const std::string name = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "bad tolerance value: " + item);
    }
    if (!(value > 0.0)) throw Error(ErrorKind::Config, "tolerances must be positive: " + item);
    if (name == "rtol") tol.rtol = value;
    else if (name == "atol") tol.atol = value;
    else throw Error(ErrorKind::Config, "unknown tolerance " + name + " (rtol, atol)");
  }
  return tol;
}

PotentialSpec load_potential(const RunConfig& cfg) {
  if (cfg.potential_file.empty() == cfg.potential_inline.empty())
    throw Error(ErrorKind::Config, "give exactly one of --potential FILE or --inline JSON");
  nlohmann::json j;
  try {
    if (!cfg.potential_inline.empty()) {
      j = nlohmann::json::parse(cfg.potential_inline);
    } else {
      std::ifstream f(cfg.potential_file);
      if (!f) throw Error(ErrorKind::Config, "cannot open " + cfg.potential_file);
      j = nlohmann::json::parse(f);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("potential JSON: ") + e.what());
  }
  try {
    return potential_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path p(cfg.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw Error(ErrorKind::Config, "output directory not writable: " + cfg.out);
  return p;
}

// real:a:b:n | axis:a:b:n (k = i kappa) | rect:re0:re1:im0:im1:nre:nim
std::vector<cplx> parse_k_grid(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::vector<cplx> ks;
  if (kind == "real" || kind == "axis") {
    const auto v = split_numbers(rest, 3, "--k-grid");
    const int n = count_field(v[2], "--k-grid");
    for (int i = 0; i < n; ++i) {
      const double x = n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1);
      ks.push_back(kind == "real" ? cplx(x, 0.0) : cplx(0.0, x));
    }
  } else if (kind == "rect") {
    const auto v = split_numbers(rest, 6, "--k-grid");
    const int nr = count_field(v[4], "--k-grid"), ni = count_field(v[5], "--k-grid");
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < ni; ++j)
        ks.emplace_back(nr == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (nr - 1),
                        ni == 1 ? v[2] : v[2] + (v[3] - v[2]) * j / (ni - 1));
  } else {
    throw Error(ErrorKind::Config, "--k-grid must start with real:, axis: or rect:");
  }
  return ks;
}

struct KappaRange {
  double lo = -6.0, hi = 6.0;
  int n = 1200;
};

KappaRange parse_kappa_range(const std::string& text) {
  if (text.empty()) return {};
  const auto v = split_numbers(text, 3, "--kappa-range");
  if (!(v[0] < v[1])) throw Error(ErrorKind::Config, "--kappa-range needs a < b");
  return {v[0], v[1], count_field(v[2], "--kappa-range")};
}

std::optional<Box> parse_box(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = split_numbers(text, 4, "--box");
  if (!(v[0] < v[1] && v[2] < v[3])) throw Error(ErrorKind::Config, "--box needs re0 < re1 and im0 < im1");
  return Box{v[0], v[1], v[2], v[3]};
}

Target parse_target(const std::string& s) {
  if (s == "W" || s == "w") return Target::W;
  if (s == "SMinus" || s == "s-") return Target::SMinus;
  if (s == "SPlus" || s == "s+") return Target::SPlus;
  throw Error(ErrorKind::Config, "unknown target " + s + " (W, SMinus, SPlus)");
}

// Axis zeros of w, s-, s+ on both sides of 0, with mode data when available.
std::vector<SpectralPoint> axis_points(const PotentialSpec& spec, const KappaRange& r, const SpectrumOptions& so) {
  std::vector<SpectralPoint> out;
  for (Target t : {Target::W, Target::SMinus, Target::SPlus}) {
    for (auto p : scan_axis(spec, t, r.lo, r.hi, r.n, so)) {
      if (std::abs(p.kappa()) <= so.axis_exclusion) continue;
      try {
        p = mode_and_nondegeneracy(spec, p, so.tol);
      } catch (const Error&) {
      }
      out.push_back(p);
    }
  }
  return out;
}

// ---- subcommands ----

struct ScatterArgs {
  std::string k_grid = "real:0.1:10:100";
};

int cmd_scatter(const RunConfig& cfg, const ScatterArgs& a) {
  const auto spec = load_potential(cfg);
  const auto tol = tolerances(cfg);
  const auto ks = parse_k_grid(a.k_grid);
  const auto dir = out_dir(cfg);
  const auto rows = kernels::scatter_parallel(spec, ks, ScatteringOptions{tol}, cfg.jobs);
  const auto table = report::scatter_table(rows);
  report::write_csv(dir / "scatter.csv", table, report::meta(spec, tol, {{"command", "scatter"}, {"k_grid", a.k_grid}}));
  double dev = 0.0;
  bool any_real = false;
  for (const auto& d : rows)
    if (d.k.imag() == 0.0 && d.coefficients_defined) {
      any_real = true;
      dev = std::max(dev, std::abs(std::norm(d.r_minus) + std::norm(d.t) - 1.0));
    }
  std::printf("wrote %s (%zu rows)\n", (dir / "scatter.csv").string().c_str(), rows.size());
  if (any_real) std::printf("max unitarity deviation on real k: %.3g\n", dev);
  return 0;
}

struct SpectrumArgs {
  std::string kappa_range;
  std::string box;
  std::string target = "W";
  int max_depth = 12;
};

int cmd_spectrum(const RunConfig& cfg, const SpectrumArgs& a) {
  const auto spec = load_potential(cfg);
  const auto tol = tolerances(cfg);
  const auto range = parse_kappa_range(a.kappa_range);
  const auto box = parse_box(a.box);
  const auto dir = out_dir(cfg);
  SpectrumOptions so{tol, cfg.jobs};
  nlohmann::json j;
  j["meta"] = report::meta(spec, tol, {{"command", "spectrum"}});
  j["axis_zeros"] = nlohmann::json::array();
  for (const auto& p : axis_points(spec, range, so)) j["axis_zeros"].push_back(report::spectral_point_json(p));
  const auto thr = detect_threshold(spec, so);
  j["threshold"] = thr ? report::spectral_point_json(*thr) : nlohmann::json(nullptr);
  if (box) {
    const Target t = parse_target(a.target);
    j["complex_zeros"] = nlohmann::json::array();
    j["box"] = {{"re_min", box->re_min}, {"re_max", box->re_max}, {"im_min", box->im_min}, {"im_max", box->im_max}};
    try {
      for (const auto& p : locate_complex_zeros(spec, t, *box, a.max_depth, so))
        j["complex_zeros"].push_back(report::spectral_point_json(p));
    } catch (const DepthExceededError& e) {
      for (const auto& p : e.partial()) j["complex_zeros"].push_back(report::spectral_point_json(p));
      j["complex_zeros_incomplete"] = true;
      std::fprintf(stderr, "warning: %s\n", e.what());
    }
  }
  report::write_json(dir / "spectrum.json", j);
  std::printf("wrote %s: %zu axis zeros, threshold %s\n", (dir / "spectrum.json").string().c_str(),
              j["axis_zeros"].size(), thr ? "present" : "absent");
  return 0;
}

struct BranchArgs {
  std::string kappa_range;
  std::string seed_class = "all";
  std::vector<double> k_star;
  double eps0 = 1e-6;
  double e_min = -25.0;
  double eps_max = 10.0;
  int max_points = 2000;
  bool profiles = false;
  bool threshold = false;
  std::string parity;
};

bool class_selected(const std::string& filter, SpectralClass cls) {
  if (filter == "all") return cls != SpectralClass::ThresholdResonance && cls != SpectralClass::ComplexResonance;
  return filter == to_string(cls);
}

int cmd_branch(const RunConfig& cfg, const BranchArgs& a) {
  const auto spec = load_potential(cfg);
  const auto tol = tolerances(cfg);
  const auto range = parse_kappa_range(a.kappa_range);
  const std::vector<std::string> classes = {"all", "BoundStatePole", "AntiBoundState", "TransmissionResonance"};
  if (std::find(classes.begin(), classes.end(), a.seed_class) == classes.end())
    throw Error(ErrorKind::Config, "unknown --seed-class " + a.seed_class);
  if (!(a.eps0 > 0.0)) throw Error(ErrorKind::Config, "--eps0 must be positive");
  if (!(a.e_min < 0.0)) throw Error(ErrorKind::Config, "--e-min must be negative");
  Parity parity = Parity::None;
  if (a.threshold) {
    if (a.parity == "even") parity = Parity::Even;
    else if (a.parity == "odd") parity = Parity::Odd;
    else throw Error(ErrorKind::Config, "--threshold needs --parity even|odd");
  }
  const auto dir = out_dir(cfg);

  BranchControls controls;
  controls.eps0 = a.eps0;
  controls.E_min = a.e_min;
  controls.eps_max = a.eps_max;
  controls.max_points = a.max_points;
  controls.shoot.tol = tol;
  const SpectrumOptions so{tol, cfg.jobs};

  std::vector<SpectralPoint> seeds;
  for (const auto& p : axis_points(spec, range, so)) {
    if (!a.k_star.empty()) {
      for (double k : a.k_star)
        if (std::abs(p.kappa() - k) < 1e-6 * (1.0 + std::abs(k))) seeds.push_back(p);
    } else if (class_selected(a.seed_class, p.cls)) {
      seeds.push_back(p);
    }
  }
  if (!a.k_star.empty() && seeds.size() < a.k_star.size())
    std::fprintf(stderr, "warning: some --k-star values match no axis zero\n");

  // Distinct branches run in parallel; each trace is sequential.
  std::vector<BranchCurve> curves(seeds.size());
  kernels::parallel_for(seeds.size(), cfg.jobs, [&](std::size_t i) { curves[i] = trace_branch(spec, seeds[i], controls); });

  std::vector<std::pair<std::string, BranchCurve>> named;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    char id[64];
    std::snprintf(id, sizeof id, "%s_%s_%zu", to_string(seeds[i].target), to_string(seeds[i].cls), i);
    named.emplace_back(id, std::move(curves[i]));
  }
  if (a.threshold) {
    try {
      named.emplace_back("threshold", threshold_branch(spec, parity, controls));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::IntegrationFailure) throw;
      std::fprintf(stderr, "threshold branch: %s\n", e.what());
    }
  }

  nlohmann::json summary = nlohmann::json::array();
  std::vector<std::pair<std::string, const BranchCurve*>> refs;
  for (const auto& [id, c] : named) {
    refs.emplace_back(id, &c);
    summary.push_back({{"id", id},
                       {"seed", report::spectral_point_json(c.seed)},
                       {"termination", to_string(c.termination)},
                       {"message", c.message},
                       {"points", c.points.size()},
                       {"accepted", c.stats.accepted},
                       {"rejected", c.stats.rejected}});
    if (c.points.empty()) std::fprintf(stderr, "%s: no points (%s: %s)\n", id.c_str(), to_string(c.termination), c.message.c_str());
    else
      std::printf("%s: %zu points, %s\n", id.c_str(), c.points.size(), to_string(c.termination));
  }
  nlohmann::json extra = {{"command", "branch"},   {"branches", summary}, {"eps0", a.eps0},
                          {"E_min", a.e_min},      {"eps_max", a.eps_max}, {"max_points", a.max_points}};
  report::write_csv(dir / "branches.csv", report::branch_table(refs, spec), report::meta(spec, tol, extra));
  if (a.profiles) {
    const auto pdir = dir / "profiles";
    fs::create_directories(pdir);
    for (const auto& [id, c] : named)
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        char name[160];
        std::snprintf(name, sizeof name, "%s_%04zu.json", id.c_str(), i);
        report::write_json(pdir / name, profile_json(c.points[i]));
      }
  }
  std::printf("wrote %s\n", (dir / "branches.csv").string().c_str());
  return 0;
}

struct ValidateArgs {
  std::vector<std::string> only;
};

int cmd_validate(const RunConfig& cfg, const ValidateArgs& a) {
  validate::Options o;
  o.tol = tolerances(cfg);
  o.jobs = cfg.jobs;
  o.only = a.only;
  const auto checks = validate::run(o);
  std::fputs(validate::table(checks).c_str(), stdout);
  int failed = 0;
  for (const auto& c : checks) failed += !c.passed;
  std::printf("%zu checks, %d failed\n", checks.size(), failed);
  return failed ? kExitFailure : 0;
}

struct CoalesceArgs {
  std::string alpha_range;
  std::string kappa_range = "-6:-0.01:400";
  std::string box = "-4:4:-6:-0.01";
  std::string target = "W";
  bool with_branches = false;
};

int cmd_coalesce(const RunConfig& cfg, const CoalesceArgs& a) {
  const auto spec = load_potential(cfg);
  const auto tol = tolerances(cfg);
  if (a.alpha_range.empty()) throw Error(ErrorKind::Config, "coalesce needs --alpha-range a:b:n");
  const auto v = split_numbers(a.alpha_range, 3, "--alpha-range");
  const int n = count_field(v[2], "--alpha-range");
  std::vector<double> alphas;
  for (int i = 0; i < n; ++i) alphas.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1));
  const auto range = parse_kappa_range(a.kappa_range);
  const auto dir = out_dir(cfg);

  CoalescenceOptions co;
  co.target = parse_target(a.target);
  co.kappa_min = range.lo;
  co.kappa_max = range.hi;
  co.axis_grid = range.n;
  co.box = *parse_box(a.box);
  co.with_branches = a.with_branches;
  co.controls.shoot.tol = tol;
  co.spectrum = SpectrumOptions{tol, cfg.jobs};
  const auto rep = coalescence_scan([&spec](double alpha) { return spec.with_alpha(alpha); }, alphas, co);

  nlohmann::json j;
  j["meta"] = report::meta(spec, tol, {{"command", "coalesce"}, {"alpha_range", a.alpha_range}, {"target", a.target}});
  j["samples"] = nlohmann::json::array();
  for (const auto& s : rep.samples) {
    nlohmann::json row{{"alpha", s.alpha}, {"axis_kappas", s.axis_kappas}, {"box_count", s.box_count}};
    row["off_axis"] = nlohmann::json::array();
    for (const auto& p : s.off_axis) row["off_axis"].push_back(report::spectral_point_json(p));
    j["samples"].push_back(row);
  }
  j["box_count_conserved"] = rep.box_count_conserved;
  j["bracket"] = rep.bracket ? nlohmann::json{rep.bracket->first, rep.bracket->second} : nlohmann::json(nullptr);
  std::printf("samples %zu, box count %s, merge %s\n", rep.samples.size(),
              rep.box_count_conserved ? "conserved" : "NOT conserved", rep.bracket ? "bracketed" : "not found");
  if (a.with_branches && rep.bracket) {
    std::vector<std::pair<std::string, const BranchCurve*>> before, after;
    for (std::size_t i = 0; i < rep.before.size(); ++i) before.emplace_back("before_" + std::to_string(i), &rep.before[i]);
    report::write_csv(dir / "coalesce_before.csv", report::branch_table(before, spec.with_alpha(rep.bracket->first)),
                      report::meta(spec.with_alpha(rep.bracket->first), tol, {{"command", "coalesce"}}));
    if (rep.after) {
      after.emplace_back("after", &*rep.after);
      report::write_csv(dir / "coalesce_after.csv", report::branch_table(after, spec.with_alpha(rep.bracket->second)),
                        report::meta(spec.with_alpha(rep.bracket->second), tol, {{"command", "coalesce"}}));
      j["after_min_eps"] = rep.after_min_eps;
    }
  }
  report::write_json(dir / "coalesce.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering resonances and nonlinear bound-state branches of 1D Schrodinger operators"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&cfg](CLI::App* sub, bool needs_potential) {
    if (needs_potential) {
      sub->add_option("--potential", cfg.potential_file, "potential descriptor JSON file");
      sub->add_option("--inline", cfg.potential_inline, "potential descriptor as inline JSON");
      sub->add_option("--out", cfg.out, "output directory");
    }
    sub->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
    sub->add_option("--tol", cfg.tol_overrides, "tolerance override NAME=VALUE (rtol, atol)");
  };

  ScatterArgs sa;
  auto* scatter = app.add_subcommand("scatter", "scattering data on a k grid");
  common(scatter, true);
  scatter->add_option("--k-grid", sa.k_grid, "real:a:b:n | axis:a:b:n | rect:re0:re1:im0:im1:nre:nim");

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "axis zeros, threshold and complex poles");
  common(spectrum, true);
  spectrum->add_option("--kappa-range", sp.kappa_range, "axis scan a:b:n (default -6:6:1200)");
  spectrum->add_option("--box", sp.box, "complex search box re0:re1:im0:im1");
  spectrum->add_option("--target", sp.target, "W, SMinus or SPlus for the box search");
  spectrum->add_option("--max-depth", sp.max_depth, "box subdivision depth");

  BranchArgs ba;
  auto* branch = app.add_subcommand("branch", "nonlinear bound-state branches");
  common(branch, true);
  branch->add_option("--kappa-range", ba.kappa_range, "axis scan a:b:n for seeds");
  branch->add_option("--seed-class", ba.seed_class, "all | BoundStatePole | AntiBoundState | TransmissionResonance");
  branch->add_option("--k-star", ba.k_star, "seed only from axis zeros at these kappa values");
  branch->add_option("--eps0", ba.eps0, "starting eps");
  branch->add_option("--e-min", ba.e_min, "stop when E falls below this");
  branch->add_option("--eps-max", ba.eps_max, "stop when eps exceeds this");
  branch->add_option("--max-points", ba.max_points, "points per branch");
  branch->add_flag("--profiles", ba.profiles, "write one profile JSON per point");
  branch->add_flag("--threshold", ba.threshold, "also trace the symmetric threshold branch");
  branch->add_option("--parity", ba.parity, "even | odd (with --threshold)");

  ValidateArgs va;
  auto* val = app.add_subcommand("validate", "oracle and invariant suite");
  common(val, false);
  val->add_option("--only", va.only, "run only these groups");

  CoalesceArgs ca;
  auto* coalesce = app.add_subcommand("coalesce", "axis-zero coalescence across an alpha sweep");
  common(coalesce, true);
  coalesce->add_option("--alpha-range", ca.alpha_range, "a:b:n")->required();
  coalesce->add_option("--kappa-range", ca.kappa_range, "axis scan a:b:n");
  coalesce->add_option("--box", ca.box, "counting box re0:re1:im0:im1");
  coalesce->add_option("--target", ca.target, "W, SMinus or SPlus");
  coalesce->add_flag("--with-branches", ca.with_branches, "trace branches before and after the merge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*scatter) return cmd_scatter(cfg, sa);
    if (*spectrum) return cmd_spectrum(cfg, sp);
    if (*branch) return cmd_branch(cfg, ba);
    if (*val) return cmd_validate(cfg, va);
    if (*coalesce) return cmd_coalesce(cfg, ca);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidPotential || e.kind() == ErrorKind::WrongKind ||
        e.kind() == ErrorKind::DeltaNotEvaluable)
      return kExitConfig;
    if (e.kind() == ErrorKind::IntegrationFailure) return kExitIntegration;
    return kExitFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
