#pragma once

// Oracle and invariant suite behind the `validate` subcommand and the
// acceptance binary. Each check records what it compared and how.

#include <functional>
#include <string>
#include <vector>

#include "resbif/ode.hpp"

namespace resbif::validate {

struct Check {
  std::string group;
  std::string name;
  std::string target;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct Options {
  ode::Tolerance tol{};
  int jobs = 0;
  // Empty means every group.
  std::vector<std::string> only;
};

struct Entry {
  std::string group;
  std::string name;
  std::function<Check(const Options&)> run;
};

// Groups: scattering, threshold, nlsolve, branch, delta, soliton, coalesce.
const std::vector<Entry>& registry();
std::vector<std::string> groups();

// Runs the selected checks; a check that throws is recorded as failed.
std::vector<Check> run(const Options& opts);
Check run_one(const Entry& entry, const Options& opts);

// Fixed-width table: group, check, target, observed, tolerance, status.
std::string table(const std::vector<Check>& checks);

}  // namespace resbif::validate
