#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "resbif/error.hpp"
#include "resbif/potential.hpp"

using namespace resbif;

TEST_CASE("square well values and support") {
  const auto s = PotentialSpec::square_well(2.0, 1.0);
  CHECK(evaluate(s, 0.3) == -2.0);
  CHECK(evaluate(s, 1.5) == 0.0);
  CHECK(evaluate(s, -1.5) == 0.0);
  CHECK(s.is_even());
}

TEST_CASE("smooth well is normalised to -alpha at its envelope maximum") {
  const auto s = PotentialSpec::smooth_well(1.0, 0.0);
  CHECK(evaluate(s, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.envelope_max() == doctest::Approx(1.0).epsilon(1e-14));
  const auto m = envelope_maximum(0.0);
  CHECK(std::abs(m.argmax) < 1e-7);
  // Grid scan over 1e5 points never exceeds the refined maximum.
  const auto m11 = envelope_maximum(-11.0);
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) best = std::max(best, smooth_envelope(-1.0 + 2.0 * i / 100000, -11.0));
  CHECK(best <= m11.value * (1.0 + 1e-12));
  CHECK(best >= m11.value * (1.0 - 1e-8));
}

TEST_CASE("max_of_envelope rejects other kinds") {
  CHECK_THROWS_AS(max_of_envelope(PotentialSpec::square_well(1.0, 1.0)), Error);
  CHECK(max_of_envelope(PotentialSpec::smooth_well(3.0, 0.5)) > 0.0);
}

TEST_CASE("piecewise cubic validation") {
  CHECK_NOTHROW(PotentialSpec::piecewise_cubic({-1.0, 0.0, 1.0}, {{-1.0, 0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}}));
  CHECK_THROWS_AS(PotentialSpec::piecewise_cubic({-1.0, 0.5, 0.2, 1.0}, {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}),
                  Error);
  CHECK_THROWS_AS(PotentialSpec::piecewise_cubic({-1.0, 0.5}, {{0, 0, 0, 0}}), Error);
  // Jump at the interior breakpoint.
  CHECK_THROWS_AS(PotentialSpec::piecewise_cubic({-1.0, 0.0, 1.0}, {{-1.0, 0, 0, 0}, {0.0, 0, 0, 0}}), Error);
}

TEST_CASE("piecewise cubic evaluates the local polynomial") {
  // Tent: V = -(1 - |x|).
  const auto s = PotentialSpec::piecewise_cubic({-1.0, 0.0, 1.0}, {{0.0, -1.0, 0, 0}, {-1.0, 1.0, 0, 0}});
  CHECK(evaluate(s, -0.5) == doctest::Approx(-0.5));
  CHECK(evaluate(s, 0.25) == doctest::Approx(-0.75));
  CHECK(s.is_even());
  CHECK(s.interior_breakpoints().size() == 1);
}

TEST_CASE("delta kind is not pointwise") {
  const auto d = PotentialSpec::delta(1.0);
  CHECK_THROWS_AS(evaluate(d, 0.1), Error);
}

TEST_CASE("with_alpha keeps the family") {
  const auto s = PotentialSpec::smooth_well(10.0, -11.0).with_alpha(20.0);
  CHECK(s.alpha() == 20.0);
  CHECK(s.beta() == -11.0);
  CHECK(evaluate(s, 0.2) == doctest::Approx(2.0 * evaluate(PotentialSpec::smooth_well(10.0, -11.0), 0.2)));
}

TEST_CASE("descriptor JSON round trip and hash") {
  const auto s = PotentialSpec::smooth_well(24.0, -11.0);
  const auto j = potential_to_json(s);
  const auto back = potential_from_json(j);
  CHECK(descriptor_hash(back) == descriptor_hash(s));
  CHECK(descriptor_hash(s).size() == 16);
  CHECK(descriptor_hash(s) != descriptor_hash(PotentialSpec::smooth_well(24.0, -10.0)));
  CHECK_THROWS_AS(potential_from_json(nlohmann::json{{"kind", "nope"}}), Error);
  const auto sq = potential_from_json(nlohmann::json::parse(R"({"kind":"square_well","alpha":2,"b":1})"));
  CHECK(sq.kind() == PotentialKind::SquareWell);
  CHECK(sq.half_width() == 1.0);
}
