#include "resbif/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "resbif/error.hpp"

namespace resbif::oracle {

namespace {

double sech(double z) { return 1.0 / std::cosh(z); }

// cos(q t) and sin(q t)/q, both even in q.
struct Trig {
  cplx c, s;
};

Trig trig(cplx q2, double t) {
  const cplx q = std::sqrt(q2);
  if (std::abs(q * t) < 1e-4) {
    const cplx z = q2 * t * t;
    return {1.0 - z / 2.0 + z * z / 24.0, t * (1.0 - z / 6.0 + z * z / 120.0)};
  }
  return {std::cos(q * t), std::sin(q * t) / q};
}

}  // namespace

double delta_threshold_energy(double alpha) { return -0.25 * alpha * alpha; }

DeltaState delta_state(double alpha, double E) {
  if (!(E < delta_threshold_energy(alpha)))
    throw Error(ErrorKind::AboveThreshold, "delta states need E < -alpha^2/4", E);
  const double a = std::sqrt(-E);
  DeltaState st;
  st.alpha = alpha;
  st.E = E;
  st.x_R = std::atanh(alpha / (2.0 * a)) / a;
  st.x_L = -st.x_R;
  // Two half-line tails cut at x = 0: 2 * 2a (1 + tanh(a x_R)).
  st.N = 4.0 * a + 2.0 * alpha;
  return st;
}

double delta_threshold_mass(double alpha) { return alpha > 0.0 ? 8.0 * std::sqrt(-delta_threshold_energy(alpha)) : 0.0; }

double DeltaState::psi(double x) const {
  const double a = std::sqrt(-E);
  const double c = x >= 0.0 ? x_R : x_L;
  return std::sqrt(-2.0 * E) * sech(a * (x - c));
}

double DeltaState::dpsi(double x) const {
  const double a = std::sqrt(-E);
  const double c = x >= 0.0 ? x_R : x_L;
  return -a * std::tanh(a * (x - c)) * psi(x);
}

JostValue squarewell_jost(double alpha, double b, cplx k, Side side, double x) {
  const cplx i(0, 1);
  const cplx ik = i * k;
  if (side == Side::Plus) {
    if (x >= b) return {std::exp(ik * x), ik * std::exp(ik * x), side, x};
    const double xe = std::max(x, -b);
    const cplx q2 = k * k + alpha;
    const cplx e = std::exp(ik * b);
    const Trig t = trig(q2, xe - b);
    JostValue v{e * (t.c + ik * t.s), e * (-q2 * t.s + ik * t.c), side, x};
    if (x < -b) {
      // Free region on the left: combination of exp(+-ikx) matched at -b.
      const cplx f0 = v.f, g0 = v.f_prime;
      const Trig u = trig(k * k, x + b);
      v.f = f0 * u.c + g0 * u.s;
      v.f_prime = -k * k * f0 * u.s + g0 * u.c;
    }
    return v;
  }
  if (x <= -b) return {std::exp(-ik * x), -ik * std::exp(-ik * x), side, x};
  const double xe = std::min(x, b);
  const cplx q2 = k * k + alpha;
  const cplx e = std::exp(ik * b);
  const Trig t = trig(q2, xe + b);
  JostValue v{e * (t.c - ik * t.s), e * (-q2 * t.s - ik * t.c), side, x};
  if (x > b) {
    const cplx f0 = v.f, g0 = v.f_prime;
    const Trig u = trig(k * k, x - b);
    v.f = f0 * u.c + g0 * u.s;
    v.f_prime = -k * k * f0 * u.s + g0 * u.c;
  }
  return v;
}

ScatteringData squarewell_scattering(double alpha, double b, cplx k) {
  const cplx i(0, 1);
  const cplx ik = i * k;
  const Trig t = trig(k * k + alpha, b);
  ScatteringData d;
  d.k = k;
  d.w = 2.0 * std::exp(2.0 * ik * b) * (t.c - ik * t.s) * ((k * k + alpha) * t.s + ik * t.c);
  d.s_minus = -2.0 * alpha * t.c * t.s;
  d.s_plus = d.s_minus;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (k != cplx(0.0) && d.w != cplx(0.0)) {
    d.t = 2.0 * ik / d.w;
    d.r_minus = d.s_minus / d.w;
    d.r_plus = d.s_plus / d.w;
    d.coefficients_defined = true;
  } else {
    d.t = d.r_minus = d.r_plus = cplx(nan, nan);
  }
  return d;
}

SolitonFacts soliton_facts(double E) {
  if (!(E < 0.0)) throw Error(ErrorKind::AboveThreshold, "solitons need E < 0", E);
  return {std::sqrt(-2.0 * E), 4.0 * std::sqrt(-E)};
}

}  // namespace resbif::oracle
