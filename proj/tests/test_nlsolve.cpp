#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resbif/error.hpp"
#include "resbif/nlsolve.hpp"

using namespace resbif;

constexpr double kBound = 1.0989975740313484;

TEST_CASE("signatures by class") {
  CHECK(signature_for(Target::W, 1.0) == BCSignature{1, -1});
  CHECK(signature_for(Target::W, -1.0) == BCSignature{-1, 1});
  CHECK(signature_for(Target::SMinus, 1.0) == BCSignature{-1, -1});
  CHECK(signature_for(Target::SPlus, -1.0) == BCSignature{-1, -1});
}

TEST_CASE("linear residual vanishes only at a zero of w") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const BCSignature sig{1, -1};
  CHECK(std::abs(shoot(s, 0.8, 0.0, sig).residual_F) > 1e-3);
  CHECK(std::abs(shoot(s, kBound, 0.0, sig).residual_F) < 1e-9);
}

TEST_CASE("solve_kappa at eps = 0 reproduces the axis zero") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto sol = solve_kappa(s, 0.0, {1, -1}, 1.05);
  CHECK(sol.kappa == doctest::Approx(kBound).epsilon(1e-10));
}

TEST_CASE("residual changes sign near kappa* at eps = 1e-3") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const double lo = shoot(s, kBound - 5e-3, 1e-3, {1, -1}).residual_F;
  const double hi = shoot(s, kBound + 5e-3, 1e-3, {1, -1}).residual_F;
  CHECK(lo * hi < 0.0);
}

TEST_CASE("boundary conditions out of range") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  CHECK_THROWS_AS(shoot(s, 0.0, 0.0, {1, -1}), Error);
  CHECK_THROWS_AS(shoot(s, 0.5, -1e-3, {1, -1}), Error);
  CHECK_THROWS_AS(shoot(s, 0.1, 1.0, {1, -1}), Error);
}

TEST_CASE("analytic derivatives match finite differences") {
  const auto s = PotentialSpec::smooth_well(6.0, 0.3);
  const BCSignature sig{1, -1};
  const double k = 1.3, e = 0.05, h = 1e-6;
  const auto c = shoot(s, k, e, sig);
  const double fk = (shoot(s, k + h, e, sig).residual_F - shoot(s, k - h, e, sig).residual_F) / (2 * h);
  const double fe = (shoot(s, k, e + h, sig).residual_F - shoot(s, k, e - h, sig).residual_F) / (2 * h);
  CHECK(c.dF_dkappa == doctest::Approx(fk).epsilon(1e-6));
  CHECK(c.dF_deps == doctest::Approx(fe).epsilon(1e-6));
}

TEST_CASE("closed-form dF/dkappa for the bound state") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  auto p = scan_axis(s, Target::W, 0.05, 1.4, 200).at(0);
  p = mode_and_nondegeneracy(s, p);
  const double h = 1e-5;
  const double fd = (shoot(s, p.kappa() + h, 0.0, {1, -1}).residual_F - shoot(s, p.kappa() - h, 0.0, {1, -1}).residual_F) / (2 * h);
  CHECK(std::abs(dF_dkappa_formula(p) - fd) < 1e-4 * std::abs(fd));
  CHECK(dF_dkappa_formula(p) != 0.0);
}

TEST_CASE("closed-form dF/dkappa for transmission and anti-bound seeds") {
  const auto s = PotentialSpec::square_well(3.0, 1.0);
  for (Target t : {Target::SMinus, Target::SPlus})
    for (auto p : scan_axis(s, t, -3.0, 3.0, 301)) {
      p = mode_and_nondegeneracy(s, p);
      const BCSignature sig = signature_for(t, p.kappa());
      const double h = 1e-5;
      const double fd = (shoot(s, p.kappa() + h, 0.0, sig).residual_F - shoot(s, p.kappa() - h, 0.0, sig).residual_F) / (2 * h);
      CHECK(std::abs(dF_dkappa_formula(p) - fd) < 1e-4 * std::abs(fd));
    }
}

TEST_CASE("profile satisfies the ODE") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto sol = solve_kappa(s, 0.3, {1, -1}, kBound);
  const auto& x = sol.grid;
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    const auto& u = sol.u;
    const double d2 = (2 * (u[i - 3] + u[i + 3]) - 27 * (u[i - 2] + u[i + 2]) + 270 * (u[i - 1] + u[i + 1]) - 490 * u[i]) / (180 * h * h);
    const double r = d2 - (s(x[i]) + sol.kappa * sol.kappa) * u[i] + sol.eps * u[i] * u[i] * u[i];
    worst = std::max(worst, std::abs(r));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("threshold problem") {
  const double pi = std::numbers::pi;
  const auto s = PotentialSpec::square_well(pi * pi / 4.0, 1.0);
  const auto m = shoot_threshold(s, 0.0, 0.0, Parity::Odd);
  CHECK(m.u_right() == doctest::Approx(2.0 / pi).epsilon(1e-10));
  CHECK(std::abs(m.residual_F) < 1e-10);
  for (double eps : {1e-6, 1e-4}) {
    const auto sol = solve_threshold_symmetric(s, eps, Parity::Odd, -0.2 * eps);
    CHECK(sol.E / eps == doctest::Approx(-2.0 / (pi * pi)).epsilon(1e-3));
    // Mirrored profile is odd.
    for (std::size_t i = 0; i < sol.u.size(); ++i) CHECK(std::abs(sol.u[i] + sol.u[sol.u.size() - 1 - i]) < 1e-12);
  }
  CHECK_THROWS_AS(shoot_threshold(PotentialSpec::smooth_well(5.0, 0.4), -0.1, 0.1, Parity::Odd), Error);
}
