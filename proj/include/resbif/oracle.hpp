#pragma once

// Closed-form references: the delta-potential nonlinear states, the square
// well's Jost functions and Wronskians, and the free 1-soliton.

#include <complex>

#include "resbif/scattering.hpp"

namespace resbif::oracle {

// Two translated solitons joined at x = 0 across V = alpha delta(x):
// psi(x) = S(x - x_R) for x > 0, S(x - x_L) for x < 0, x_L = -x_R,
// with tanh(sqrt(-E) x_R) = alpha / (2 sqrt(-E)).
struct DeltaState {
  double alpha = 0.0;
  double E = 0.0;
  double x_R = 0.0;
  double x_L = 0.0;
  double N = 0.0;

  double psi(double x) const;
  double dpsi(double x) const;
};

// E_star = -alpha^2 / 4; states exist for E < E_star.
double delta_threshold_energy(double alpha);

// Throws AboveThreshold unless E < -alpha^2/4.
DeltaState delta_state(double alpha, double E);

// Limit of N as E decreases to E_star: 8 sqrt(-E_star) for a barrier, 0 for a well.
double delta_threshold_mass(double alpha);

// Square well V = -alpha on |x| <= b, matched with cos(q t) and sin(q t)/q,
// q^2 = k^2 + alpha, so no branch of the square root is ever chosen.
ScatteringData squarewell_scattering(double alpha, double b, cplx k);

JostValue squarewell_jost(double alpha, double b, cplx k, Side side, double x);

struct SolitonFacts {
  double peak = 0.0;
  double mass = 0.0;
};

SolitonFacts soliton_facts(double E);

}  // namespace resbif::oracle
