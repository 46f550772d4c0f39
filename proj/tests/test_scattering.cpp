#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resbif/error.hpp"
#include "resbif/kernels.hpp"
#include "resbif/oracle.hpp"
#include "resbif/scattering.hpp"

using namespace resbif;
const cplx I(0.0, 1.0);

TEST_CASE("free Jost solutions") {
  const auto z = PotentialSpec::zero();
  const auto f = jost_plus(z, 1.7, 0.0);
  CHECK(std::abs(f.f - 1.0) < 1e-10);
  CHECK(std::abs(f.f_prime - I * 1.7) < 1e-10);
  const auto g = jost_minus(z, 2.0 * I, 0.0);
  CHECK(std::abs(g.f - 1.0) < 1e-10);
  CHECK(std::abs(g.f_prime - 2.0) < 1e-10);
}

TEST_CASE("Jost values match the square-well closed form") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  for (double x : {-1.0, 0.0, 1.0}) {
    const auto p = jost_plus(s, 1.0, x);
    const auto q = oracle::squarewell_jost(2.0, 1.0, 1.0, Side::Plus, x);
    CHECK(std::abs(p.f - q.f) < 1e-9);
    CHECK(std::abs(p.f_prime - q.f_prime) < 1e-9);
    const auto m = jost_minus(s, 1.0, x);
    const auto r = oracle::squarewell_jost(2.0, 1.0, 1.0, Side::Minus, x);
    CHECK(std::abs(m.f - r.f) < 1e-9);
    CHECK(std::abs(m.f_prime - r.f_prime) < 1e-9);
  }
}

TEST_CASE("k = 0 on a real potential stays real") {
  const auto s = PotentialSpec::square_well(std::numbers::pi * std::numbers::pi / 4.0, 1.0);
  const auto f = jost_minus(s, 0.0, -1.0);
  CHECK(std::abs(f.f.imag()) < 1e-12);
  CHECK(std::abs(f.f_prime.imag()) < 1e-12);
}

TEST_CASE("reflection symmetry for even potentials") {
  const auto s = PotentialSpec::smooth_well(5.0, 0.0);
  const cplx k(0.8, -0.3);
  for (double x : {-0.4, 0.2, 0.9}) {
    const auto m = jost_minus(s, k, x);
    const auto p = jost_plus(s, k, -x);
    CHECK(std::abs(m.f - p.f) < 1e-9 * std::abs(p.f));
    CHECK(std::abs(m.f_prime + p.f_prime) < 1e-9 * std::abs(p.f_prime));
  }
}

TEST_CASE("scattering data of the free line") {
  const auto d = scattering_data(PotentialSpec::zero(), 3.0);
  CHECK(std::abs(d.w - 6.0 * I) < 1e-10);
  CHECK(std::abs(d.s_minus) < 1e-10);
  CHECK(std::abs(d.t - 1.0) < 1e-10);
  CHECK(std::abs(d.r_minus) < 1e-10);
}

TEST_CASE("k = 0 leaves the coefficients undefined") {
  const auto d = scattering_data(PotentialSpec::square_well(1.0, 1.0), 0.0);
  CHECK_FALSE(d.coefficients_defined);
  CHECK(std::isnan(d.t.real()));
}

TEST_CASE("agreement with the closed form at k = 1.3 + 0.4i") {
  const cplx k(1.3, 0.4);
  const auto d = scattering_data(PotentialSpec::square_well(2.0, 1.0), k);
  const auto r = oracle::squarewell_scattering(2.0, 1.0, k);
  CHECK(std::abs(d.w - r.w) < 1e-9 * std::abs(r.w));
  CHECK(std::abs(d.s_minus - r.s_minus) < 1e-9 * std::abs(r.w));
  CHECK(std::abs(d.s_plus - r.s_plus) < 1e-9 * std::abs(r.w));
}

TEST_CASE("deep complex k uses the m form without loss") {
  const cplx k(0.5, -30.0);
  const auto d = scattering_data(PotentialSpec::square_well(2.0, 1.0), k);
  const auto r = oracle::squarewell_scattering(2.0, 1.0, k);
  CHECK(std::abs(d.w - r.w) < 1e-8 * std::abs(r.w));
}

TEST_CASE("axis Wronskian of the free line") {
  CHECK(wronskian_on_axis(PotentialSpec::zero(), 1.0) == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("target derivatives match finite differences") {
  const auto s = PotentialSpec::smooth_well(6.0, 0.4);
  const cplx k(0.9, -0.35);
  const double h = 1e-6;
  for (Target t : {Target::W, Target::SMinus, Target::SPlus}) {
    const auto v = evaluate_target(s, t, k);
    const cplx fd = (evaluate_target(s, t, k + h).value - evaluate_target(s, t, k - h).value) / (2.0 * h);
    CHECK(std::abs(v.derivative - fd) < 1e-6 * (std::abs(fd) + 1.0));
    const auto a = evaluate_target_axis(s, t, -0.7);
    const double fda = (evaluate_target_axis(s, t, -0.7 + h).value - evaluate_target_axis(s, t, -0.7 - h).value) / (2.0 * h);
    CHECK(std::abs(a.derivative - fda) < 1e-6 * (std::abs(fda) + 1.0));
  }
}

TEST_CASE("delta kind cannot be integrated") {
  CHECK_THROWS_AS(scattering_data(PotentialSpec::delta(1.0), 1.0), Error);
}

TEST_CASE("serial and parallel kernels agree exactly") {
  const auto s = PotentialSpec::square_well(3.0, 1.0);
  std::vector<cplx> ks;
  for (int i = 0; i < 40; ++i) ks.emplace_back(-2.0 + 0.1 * i, -0.3);
  const auto a = kernels::scatter_serial(s, ks);
  const auto b = kernels::scatter_parallel(s, ks, {}, 4);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(a[i].w == b[i].w);
    CHECK(a[i].s_minus == b[i].s_minus);
  }
}
