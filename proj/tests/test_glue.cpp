#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "resbif/error.hpp"
#include "resbif/glue.hpp"
#include "resbif/oracle.hpp"

using namespace resbif;

TEST_CASE("soliton tail integrals") {
  CHECK(tail_mass(-1.0, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tail_mass(-4.0, 0.0, 0.0) == doctest::Approx(4.0).epsilon(1e-15));
  // 2 (1 - tanh 1), 30-digit reference.
  CHECK(tail_mass(-1.0, 1.0, 0.0) == doctest::Approx(0.47681168808847022).epsilon(1e-14));
  // Far tails stay accurate.
  CHECK(tail_mass(-1.0, 30.0, 0.0) == doctest::Approx(4.0 * std::exp(-60.0)).epsilon(1e-10));
  // Gradient tail against Simpson quadrature.
  const double E = -2.0, from = 0.3, c = -0.2;
  double s = 0.0;
  const int n = 20000;
  const double L = 40.0, h = L / n;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double d = soliton_derivative(from + i * h - c, E);
    s += w * d * d;
  }
  CHECK(tail_gradient_mass(E, from, c) == doctest::Approx(s * h / 3.0).epsilon(1e-10));
}

TEST_CASE("matching recovers a known soliton centre") {
  const double E = -1.7;
  for (double center : {-2.0, 0.4, 0.9, 1.0, 1.4, 5.0}) {
    const double x = 1.0;
    const auto m = match_boundary(x, soliton(x - center, E), soliton_derivative(x - center, E), E, GlueSide::Right);
    CHECK(m.center == doctest::Approx(center).epsilon(1e-10));
    CHECK(m.sign == 1);
    const auto l = match_boundary(-x, -soliton(-x + center, E), -soliton_derivative(-x + center, E), E, GlueSide::Left);
    CHECK(l.center == doctest::Approx(-center).epsilon(1e-10));
    CHECK(l.sign == -1);
  }
}

TEST_CASE("matching errors") {
  CHECK_THROWS_AS(match_boundary(1.0, 0.0, 1.0, -1.0, GlueSide::Right), Error);
  CHECK_THROWS_AS(match_boundary(1.0, 1.0, 5.0, -1.0, GlueSide::Right), Error);
  CHECK_THROWS_AS(match_boundary(1.0, 1.0, 0.1, 0.5, GlueSide::Right), Error);
}

TEST_CASE("glued mass reproduces the delta oracle") {
  for (double alpha : {1.0, -1.0})
    for (double E : {-0.5, -1.0, -6.0}) {
      const auto st = oracle::delta_state(alpha, E);
      const double p0 = soliton(-st.x_R, E);
      const auto r = match_boundary(0.0, p0, soliton_derivative(-st.x_R, E), E, GlueSide::Right);
      const auto l = match_boundary(0.0, p0, soliton_derivative(-st.x_L, E), E, GlueSide::Left);
      CHECK(std::abs(glued_mass(E, 0.0, 0.0, 0.0, l.center, r.center) - st.N) < 1e-8);
    }
}

TEST_CASE("assembled states are continuous and solve the equation") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  for (double eps : {1e-6, 0.05, 0.2}) {
    const auto sol = solve_kappa(s, eps, {1, -1}, 1.0989975740313484);
    const auto g = assemble(sol, 1.0);
    CHECK(g.residuals.max() < 1e-9);
    CHECK(global_residual(s, g).relative() < 1e-6);
    CHECK(g.psi(1.0 - 1e-12) == doctest::Approx(g.psi(1.0 + 1e-12)).epsilon(1e-9));
    CHECK(g.N > 0.0);
    CHECK(g.H1 > g.N);
  }
}

TEST_CASE("profile JSON layout") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto g = assemble(solve_kappa(s, 0.1, {1, -1}, 1.1), 1.0);
  const auto j = profile_json(g);
  CHECK(j["grid"].size() == j["psi"].size());
  CHECK(j.contains("x_R"));
  const auto& grid = j["grid"];
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i].get<double>() > grid[i - 1].get<double>());
}
