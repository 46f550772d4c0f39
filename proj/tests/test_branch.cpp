#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resbif/branch.hpp"
#include "resbif/error.hpp"

using namespace resbif;

namespace {

SpectralPoint first_zero(const PotentialSpec& s, Target t, double lo, double hi) {
  const auto pts = scan_axis(s, t, lo, hi, 400);
  REQUIRE(!pts.empty());
  return pts.back();
}

}  // namespace

TEST_CASE("bound-state branch starts at zero mass and grows") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto p = first_zero(s, Target::W, 0.05, 3.0);
  const auto c = trace_branch(s, p, BranchControls{});
  REQUIRE(c.points.size() > 10);
  CHECK(c.points.front().eps == doctest::Approx(1e-6));
  CHECK(c.points.front().N < 1e-4);
  CHECK(std::abs(c.points.front().E + p.kappa() * p.kappa()) < 1e-4);
  for (std::size_t i = 1; i < 6; ++i) CHECK(c.points[i].N > c.points[i - 1].N);
  CHECK(c.termination == Termination::ReachedEMin);
  for (const auto& g : c.points) CHECK(g.E >= -25.0);
}

TEST_CASE("anti-bound branch: mass threshold and drift of the tails") {
  const auto s = PotentialSpec::square_well(-1.0, 0.5);
  const auto p = first_zero(s, Target::W, -6.0, -0.01);
  const auto c = trace_branch(s, p, BranchControls{});
  REQUIRE(!c.points.empty());
  CHECK(std::abs(c.points.front().N - 8.0 * std::abs(p.kappa())) < 0.02 * 8.0 * std::abs(p.kappa()));
  // Tail centres move outward as eps -> 0.
  CHECK(c.points.front().x_R > c.points[5].x_R);
  CHECK(c.points.front().x_L < c.points[5].x_L);
}

TEST_CASE("transmission branch mass threshold") {
  const auto s = PotentialSpec::square_well(3.0, 1.0);
  const auto p = first_zero(s, Target::SMinus, 0.05, 3.0);
  const auto c = trace_branch(s, p, BranchControls{});
  REQUIRE(!c.points.empty());
  CHECK(std::abs(c.points.front().N - 4.0 * p.kappa()) < 0.02 * 4.0 * p.kappa());
}

TEST_CASE("seed refusals") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  auto p = first_zero(s, Target::W, 0.05, 3.0);
  SpectralPoint off = p;
  off.k_star = cplx(0.3, -0.2);
  CHECK_THROWS_AS(seed_branch(s, off, 1e-6), Error);
  SpectralPoint thr = p;
  thr.cls = SpectralClass::ThresholdResonance;
  CHECK_THROWS_AS(seed_branch(s, thr, 1e-6), Error);
  p = mode_and_nondegeneracy(s, p);
  p.nondegeneracy = 1e-9;
  CHECK_THROWS_AS(seed_branch(s, p, 1e-6), Error);
  const auto c = trace_branch(s, p, BranchControls{});
  CHECK(c.points.empty());
  CHECK(c.termination == Termination::Degenerate);
}

TEST_CASE("halving the step reproduces N(E)") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto p = first_zero(s, Target::W, 0.05, 3.0);
  BranchControls a;
  a.E_min = -4.0;
  BranchControls b = a;
  b.ds0 *= 0.5;
  b.ds_max *= 0.5;
  const auto ca = trace_branch(s, p, a);
  const auto cb = trace_branch(s, p, b);
  REQUIRE(ca.points.size() > 3);
  // Compare at E values of the coarse curve by re-solving on the fine curve's neighbourhood.
  for (const auto& g : ca.points) {
    const GluedState* lo = nullptr;
    const GluedState* hi = nullptr;
    for (std::size_t i = 1; i < cb.points.size(); ++i) {
      const double e0 = cb.points[i - 1].E, e1 = cb.points[i].E;
      if ((e0 - g.E) * (e1 - g.E) <= 0.0) {
        lo = &cb.points[i - 1];
        hi = &cb.points[i];
        break;
      }
    }
    if (!lo) continue;
    if (lo->E == hi->E) continue;
    // Re-solve on the fine side exactly at the coarse point's eps to avoid interpolation error.
    const auto again = solve_kappa(s, g.eps, g.inner.signature, lo->inner.kappa);
    const auto ga = assemble(again, 1.0);
    CHECK(std::abs(ga.N - g.N) < 1e-6 * std::max(1.0, g.N));
  }
}

TEST_CASE("threshold branch") {
  const double pi = std::numbers::pi;
  const auto s = PotentialSpec::square_well(pi * pi / 4.0, 1.0);
  BranchControls c;
  c.eps_max = 1e-2;
  const auto br = threshold_branch(s, Parity::Odd, c);
  REQUIRE(br.points.size() > 10);
  for (const auto& g : br.points) {
    CHECK(std::abs(g.x_R + g.x_L) < 1e-9);
    CHECK(g.residuals.max() < 1e-9);
    CHECK(std::abs(g.x_R - 0.75) < 1e-4);
  }
  CHECK(br.points.front().N < 1e-2);
  CHECK_THROWS_AS(threshold_branch(s, Parity::Even, c), Error);
  CHECK_THROWS_AS(threshold_branch(PotentialSpec::square_well(2.0, 1.0), Parity::Odd, c), Error);
  CHECK_THROWS_AS(threshold_branch(PotentialSpec::smooth_well(5.0, 0.4), Parity::Odd, c), Error);
}

TEST_CASE("coalescence of two anti-bound states") {
  CoalescenceOptions o;
  std::vector<double> h;
  for (int i = 0; i <= 6; ++i) h.push_back(1.0 + 0.25 * i);
  const auto r = coalescence_scan([](double a) { return PotentialSpec::square_well(-a, 0.5); }, h, o);
  REQUIRE(r.bracket.has_value());
  CHECK(r.bracket->first == doctest::Approx(1.75));
  CHECK(r.bracket->second == doctest::Approx(2.0));
  CHECK(r.box_count_conserved);
  // Far from the merge the axis zeros move continuously.
  for (std::size_t i = 1; i + 1 < r.samples.size() && r.samples[i].alpha < 1.75; ++i)
    for (std::size_t j = 0; j < r.samples[i].axis_kappas.size(); ++j)
      CHECK(std::abs(r.samples[i].axis_kappas[j] - r.samples[i - 1].axis_kappas[j]) < 4.0 * 0.25);
}
