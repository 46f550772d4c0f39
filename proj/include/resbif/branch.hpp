#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resbif/glue.hpp"

namespace resbif {

enum class Termination {
  ReachedEpsMax,
  ReachedEMin,
  NewtonFailed,
  BCOutOfRange,
  Degenerate,
  ReachedMaxPoints,
  ReachedEpsMin,
};

const char* to_string(Termination t);

struct BranchControls {
  double eps0 = 1e-6;
  // Pseudo-arclength steps in the (kappa, ln eps) plane.
  double ds0 = 0.05;
  double ds_max = 0.4;
  double ds_min = 1e-7;
  double E_min = -25.0;
  double eps_max = 10.0;
  double eps_min = 1e-13;
  int max_points = 2000;
  ShootOptions shoot{};
};

struct StepStats {
  int accepted = 0;
  int rejected = 0;
  int newton_iterations = 0;
};

struct BranchCurve {
  SpectralPoint seed;
  std::vector<GluedState> points;
  Termination termination = Termination::ReachedEpsMax;
  std::string message;
  StepStats stats;
};

// Solves at eps0 from kappa_star and glues. Refuses degenerate
// (|nondegeneracy| < 1e-6), non-simple and off-axis seeds.
GluedState seed_branch(const PotentialSpec& spec, const SpectralPoint& point, double eps0,
                       const ShootOptions& opts = {});

// Continuation of F(kappa, eps) = 0 from a converged start. direction = +1
// leaves the start towards increasing eps, -1 towards decreasing eps.
BranchCurve continue_branch(const PotentialSpec& spec, const GluedState& start, const BranchControls& controls,
                            int direction = +1);

// seed_branch followed by continue_branch.
BranchCurve trace_branch(const PotentialSpec& spec, const SpectralPoint& point, const BranchControls& controls);

// Symmetric threshold branch: eps swept geometrically upward from eps0 with
// warm-started solves, until eps_max, E_min or max_points. `eps_per_decade`
// sets the sweep density.
BranchCurve threshold_branch(const PotentialSpec& spec, Parity parity, const BranchControls& controls,
                             int eps_per_decade = 8);

struct CoalescenceSample {
  double alpha = 0.0;
  std::vector<double> axis_kappas;
  int box_count = 0;
  std::vector<SpectralPoint> off_axis;
};

struct CoalescenceReport {
  std::vector<CoalescenceSample> samples;
  // Interval of alpha across which two axis zeros leave the axis as a pair.
  std::optional<std::pair<double, double>> bracket;
  bool box_count_conserved = true;
  // Branches before the merge (one per axis zero) and the connected branch
  // after it; filled when `with_branches` is set and a bracket was found.
  std::vector<BranchCurve> before;
  std::optional<BranchCurve> after;
  double after_min_eps = 0.0;
};

struct CoalescenceOptions {
  Target target = Target::W;
  double kappa_min = -6.0, kappa_max = -0.01;
  int axis_grid = 400;
  Box box{-4.0, 4.0, -6.0, -0.01};
  bool with_branches = false;
  BranchControls controls{};
  SpectrumOptions spectrum{};
};

CoalescenceReport coalescence_scan(const std::function<PotentialSpec(double)>& family,
                                   const std::vector<double>& alphas, const CoalescenceOptions& opts = {});

}  // namespace resbif
