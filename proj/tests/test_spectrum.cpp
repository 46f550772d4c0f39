#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resbif/error.hpp"
#include "resbif/spectrum.hpp"

using namespace resbif;

// Reference zeros from the closed-form square-well factors
// (C + kappa S)(q^2 S - kappa C), q^2 = alpha - kappa^2, solved in 30 digits.
constexpr double kBound = 1.0989975740313484;
constexpr double kAntiBound = -0.25212707715313622;
constexpr double kBarrierShallow = -0.62410875887910134;
constexpr double kBarrierDeep = -4.1343815902725977;
constexpr double kTransmission = 0.72979373779696160;

TEST_CASE("bound state of the alpha = 2 well") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto pts = scan_axis(s, Target::W, 0.05, 1.4, 200);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].kappa() == doctest::Approx(kBound).epsilon(1e-12));
  CHECK(pts[0].cls == SpectralClass::BoundStatePole);
  CHECK(pts[0].simple);
}

TEST_CASE("anti-bound states") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto pts = scan_axis(s, Target::W, -3.0, -0.05, 200);
  REQUIRE(!pts.empty());
  CHECK(pts.back().kappa() == doctest::Approx(kAntiBound).epsilon(1e-12));
  CHECK(pts.back().cls == SpectralClass::AntiBoundState);
  const auto bar = PotentialSpec::square_well(-1.0, 0.5);
  const auto b = scan_axis(bar, Target::W, -6.0, -0.01, 400);
  REQUIRE(b.size() == 2);
  CHECK(b[0].kappa() == doctest::Approx(kBarrierDeep).epsilon(1e-12));
  CHECK(b[1].kappa() == doctest::Approx(kBarrierShallow).epsilon(1e-12));
}

TEST_CASE("transmission resonances on the axis") {
  const auto s = PotentialSpec::square_well(3.0, 1.0);
  const auto pts = scan_axis(s, Target::SMinus, -3.0, 3.0, 301);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].kappa() == doctest::Approx(-kTransmission).epsilon(1e-12));
  CHECK(pts[1].kappa() == doctest::Approx(kTransmission).epsilon(1e-12));
  CHECK(pts[1].cls == SpectralClass::TransmissionResonance);
}

TEST_CASE("free line has no zeros") {
  CHECK(scan_axis(PotentialSpec::zero(), Target::W, -3.0, 3.0, 100).empty());
  CHECK(count_zeros_box(PotentialSpec::zero(), Target::W, Box{-1.0, 1.0, -1.0, -0.1}) == 0);
  CHECK(locate_complex_zeros(PotentialSpec::zero(), Target::W, Box{-1.0, 1.0, -1.0, -0.1}).empty());
}

TEST_CASE("box counts agree with axis scans") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  CHECK(count_zeros_box(s, Target::W, Box{-0.1, 0.1, -0.4, -0.1}) == 1);
  CHECK(count_zeros_box(s, Target::W, Box{-0.1, 0.1, 0.5, 1.5}) == 1);
}

TEST_CASE("complex resonances come in pairs k, -conj k") {
  const auto s = PotentialSpec::square_well(8.0, 1.0);
  const Box box{0.3, 8.0, -3.0, -0.05};
  const Box mirror{-8.0, -0.3, -3.0, -0.05};
  CHECK(count_zeros_box(s, Target::W, box) == count_zeros_box(s, Target::W, mirror));
  const auto zs = locate_complex_zeros(s, Target::W, Box{-8.0, 8.0, -3.0, -0.05});
  REQUIRE(!zs.empty());
  CHECK(zs.size() % 2 == 0);
  for (const auto& z : zs) {
    if (on_axis(z.k_star)) continue;
    CHECK(z.cls == SpectralClass::ComplexResonance);
    double best = 1e9;
    for (const auto& w : zs) best = std::min(best, std::abs(w.k_star + std::conj(z.k_star)));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("threshold detection") {
  const double a = std::numbers::pi * std::numbers::pi / 4.0;
  const auto p = detect_threshold(PotentialSpec::square_well(a, 1.0));
  REQUIRE(p.has_value());
  CHECK(p->cls == SpectralClass::ThresholdResonance);
  CHECK(p->parity == Parity::Odd);
  CHECK_FALSE(detect_threshold(PotentialSpec::square_well(2.0, 1.0)).has_value());
  // The even threshold of the square well sits at alpha = pi^2.
  const auto e = detect_threshold(PotentialSpec::square_well(std::numbers::pi * std::numbers::pi, 1.0));
  REQUIRE(e.has_value());
  CHECK(e->parity == Parity::Even);
}

TEST_CASE("mode trace and non-degeneracy") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  const auto pts = scan_axis(s, Target::W, 0.05, 1.4, 200);
  const auto p = mode_and_nondegeneracy(s, pts[0]);
  REQUIRE(p.mode.has_value());
  CHECK(p.nondegeneracy > 0.0);
  CHECK_FALSE(p.degenerate);
  SpectralPoint off = pts[0];
  off.k_star = cplx(0.5, -0.2);
  CHECK_THROWS_AS(mode_and_nondegeneracy(s, off), Error);
}

TEST_CASE("threshold mode integrals of the critical well") {
  // Odd mode normalised to (2/pi) sin(pi x / 2): int_0^1 U^2 = 2/pi^2, int_0^1 U^4 = 6/pi^4.
  const double pi = std::numbers::pi;
  const auto p = detect_threshold(PotentialSpec::square_well(pi * pi / 4.0, 1.0));
  REQUIRE(p.has_value());
  REQUIRE(p->mode.has_value());
  const double scale = (2.0 / pi) / p->mode->U_at_plus_b;
  CHECK(p->mode->int_U2 * scale * scale / 2.0 == doctest::Approx(2.0 / (pi * pi)).epsilon(1e-9));
  CHECK(p->mode->int_U4 * std::pow(scale, 4) / 2.0 == doctest::Approx(6.0 / std::pow(pi, 4)).epsilon(1e-9));
}

TEST_CASE("threshold location of the smooth-well family") {
  // Independent reference: SciPy DOP853 shooting at rtol 1e-13 gives 24.0408523759.
  const double a = bisect_threshold_alpha(PotentialSpec::smooth_well(24.0, -11.0), 20.0, 28.0);
  CHECK(a == doctest::Approx(24.0408523759).epsilon(1e-9));
  CHECK(std::abs(a - 24.04031) < 1e-3);
}
