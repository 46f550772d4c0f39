#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resbif/error.hpp"
#include "resbif/glue.hpp"
#include "resbif/oracle.hpp"

using namespace resbif;

TEST_CASE("delta states: closed-form centres") {
  CHECK(oracle::delta_state(1.0, -1.0).x_R == doctest::Approx(0.54930614433405485).epsilon(1e-14));
  CHECK(oracle::delta_state(-1.0, -1.0).x_R == doctest::Approx(-0.54930614433405485).epsilon(1e-14));
  CHECK(oracle::delta_state(1.0, -1.0).x_L == doctest::Approx(-0.54930614433405485).epsilon(1e-14));
  CHECK_THROWS_AS(oracle::delta_state(1.0, -0.2), Error);
  CHECK(oracle::delta_threshold_energy(2.0) == -1.0);
}

TEST_CASE("delta states satisfy the jump condition") {
  for (double alpha : {1.0, -1.0, 0.3})
    for (double E : {-0.5, -2.0}) {
      const auto s = oracle::delta_state(alpha, E);
      const double jump = s.dpsi(1e-300) - s.dpsi(-1e-300);
      CHECK(std::abs(jump - alpha * s.psi(0.0)) < 1e-10);
    }
}

TEST_CASE("delta mass limits") {
  CHECK(std::abs(oracle::delta_state(1.0, -0.25 - 1e-12).N - 4.0) < 1e-6);
  CHECK(std::abs(oracle::delta_state(-1.0, -0.25 - 1e-12).N) < 1e-6);
  CHECK(oracle::delta_threshold_mass(1.0) == doctest::Approx(4.0));
  CHECK(oracle::delta_threshold_mass(-1.0) == 0.0);
  // Monotone on the branch.
  double prev = oracle::delta_state(1.0, -0.26).N;
  for (double E = -0.3; E > -5.0; E -= 0.1) {
    const double n = oracle::delta_state(1.0, E).N;
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("square well closed form: trivial cases") {
  const auto d = oracle::squarewell_scattering(0.0, 1.0, cplx(0.7, 0.2));
  CHECK(std::abs(d.w - 2.0 * cplx(0, 1) * cplx(0.7, 0.2)) < 1e-14);
  CHECK(std::abs(d.s_minus) < 1e-14);
  const double a = std::numbers::pi * std::numbers::pi / 4.0;
  CHECK(std::abs(oracle::squarewell_scattering(a, 1.0, cplx(0.0)).w) < 1e-14);
}

TEST_CASE("soliton facts") {
  CHECK(oracle::soliton_facts(-1.0).peak == doctest::Approx(std::sqrt(2.0)));
  CHECK(oracle::soliton_facts(-1.0).mass == doctest::Approx(4.0));
  CHECK(oracle::soliton_facts(-4.0).mass == doctest::Approx(8.0));
}
