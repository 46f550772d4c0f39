#pragma once

// Full-line states: psi = sqrt(eps) u on [-b, b], joined to translated
// 1-solitons S(x - x_R; E) for x > b and S(x - x_L; E) for x < -b, where
// S(z; E) = sqrt(-2E) sech(sqrt(-E) z).

#include <json.hpp>

#include "resbif/nlsolve.hpp"

namespace resbif {

double soliton(double z, double E);
double soliton_derivative(double z, double E);

enum class GlueSide { Left, Right };

struct TailMatch {
  double center = 0.0;
  int sign = 1;
};

// Tail through (x_b, psi, dpsi). Uses artanh of the normalised log-derivative
// while it is well conditioned (|L| <= 0.9 sqrt(-E)) and the amplitude
// |psi| = S(x_b - center) otherwise. Throws ZeroBoundaryValue or
// LogDerivOutOfRange.
TailMatch match_boundary(double x_b, double psi, double dpsi, double E, GlueSide side);

TailMatch match_tail(const InnerSolution& inner, GlueSide side);

// Integral of S(x - center; E)^2 over [from_x, inf).
double tail_mass(double E, double from_x, double center);
// Integral of S'(x - center; E)^2 over [from_x, inf).
double tail_gradient_mass(double E, double from_x, double center);

// N = eps int u^2 + both tails. x_L, x_R are the tail centres and b the
// matching half-width (0 for the delta oracle).
double glued_mass(double E, double eps, double int_u2, double b, double x_L, double x_R);

struct JumpResiduals {
  double psi_jump_b = 0.0;
  double dpsi_jump_b = 0.0;
  double psi_jump_mb = 0.0;
  double dpsi_jump_mb = 0.0;

  double max() const;
};

struct GluedState {
  double E = 0.0;
  double eps = 0.0;
  double b = 1.0;
  InnerSolution inner;
  double x_L = 0.0, x_R = 0.0;
  int sign_L = 1, sign_R = 1;
  double N = 0.0;
  double H1 = 0.0;
  JumpResiduals residuals;

  // Cubic Hermite interpolation inside, closed-form tails outside.
  double psi(double x) const;
  double dpsi(double x) const;
  // max |psi| over the line.
  double amplitude() const;
};

GluedState assemble(const InnerSolution& inner, double b);

struct GlobalResidual {
  double sup = 0.0;
  double amplitude = 0.0;
  double relative() const { return amplitude > 0.0 ? sup / amplitude : sup; }
};

// sup |-psi'' + V psi - psi^3 - E psi| with a seven-point second difference on
// the inner grid and on sampled tails; stencils crossing +-b or an interior
// breakpoint are skipped.
GlobalResidual global_residual(const PotentialSpec& spec, const GluedState& state);

nlohmann::json profile_json(const GluedState& state);

}  // namespace resbif
