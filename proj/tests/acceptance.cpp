// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "resbif/validate.hpp"

using namespace resbif;

namespace {

struct Criterion {
  std::string id;
  std::string title;
  std::vector<std::string> checks;
  double budget_seconds;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1", "unitarity on real k", {"unitarity"}, 5},
      {"2", "ODE scattering vs closed-form square well", {"squarewell_grid"}, 30},
      {"3", "threshold detection, odd mode", {"threshold_detection"}, 1},
      {"4", "x_R(0) = 3/4 on the odd threshold branch", {"threshold_x_R_limit"}, 60},
      {"5", "E/eps -> -2/pi^2", {"threshold_energy_slope"}, 60},
      {"6", "closed-form dF/dkappa", {"dF_dkappa_formula"}, 10},
      {"7", "bound-state bifurcation from zero mass", {"bound_state_bifurcation"}, 30},
      {"8", "anti-bound mass threshold 8|kappa|", {"antibound_mass_threshold"}, 120},
      {"9", "transmission mass threshold 4|kappa|", {"transmission_mass_threshold"}, 120},
      {"10", "tail drift slope -1/(2 kappa)", {"drift_law"}, 120},
      {"11", "delta oracle limits and glued mass", {"delta_mass_limits", "delta_glue_mass"}, 5},
      {"12", "no-go region for a barrier", {"no_go_barrier"}, 120},
      {"13", "global and jump residuals of all states", {"global_residual_ode", "global_residual_jumps"}, 120},
      {"alpha*", "smooth-well threshold alpha* = 24.04031", {"alpha_star"}, 120},
  };
  validate::Options opts;
  int failures = 0;
  for (const auto& c : criteria) {
    bool ok = true;
    double seconds = 0.0;
    std::string detail;
    for (const auto& name : c.checks) {
      for (const auto& e : validate::registry()) {
        if (e.name != name) continue;
        const auto r = validate::run_one(e, opts);
        ok = ok && r.passed;
        seconds += r.seconds;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s=%.3g (tol %.3g)", detail.empty() ? "" : "; ", name.c_str(), r.observed,
                      r.tolerance);
        detail += buf;
        if (!r.detail.empty()) detail += " [" + r.detail + "]";
      }
    }
    // Shared branch traces are cached, so only the first user pays for them.
    const bool in_time = seconds <= c.budget_seconds;
    ok = ok && in_time;
    failures += !ok;
    std::printf("%s criterion %-6s %-46s %.2fs  %s\n", ok ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), seconds,
                detail.c_str());
  }
  std::fflush(stdout);
  return failures;
}
