#include "resbif/scattering.hpp"

#include <cmath>
#include <limits>

#include "resbif/error.hpp"

namespace resbif {

const char* to_string(Target target) {
  switch (target) {
    case Target::W: return "W";
    case Target::SMinus: return "SMinus";
    case Target::SPlus: return "SPlus";
  }
  return "unknown";
}

namespace {

// Jost data in terms of lambda = i k: f'' = (V + lambda^2) f, with
// f_s = exp(s lambda x) for s x >= b (s = +1 plus side, -1 minus side).
// Derivatives are with respect to lambda.
template <typename T>
struct Prop {
  T f, fp, df, dfp;
};

template <typename T, bool Deriv>
Prop<T> propagate(const PotentialSpec& spec, T lambda, int s, double x_eval, const ode::Tolerance& tol) {
  if (spec.kind() == PotentialKind::DeltaClosedForm)
    throw Error(ErrorKind::DeltaNotEvaluable, "Jost integration needs a pointwise potential");
  const double b = spec.half_width();
  const double sd = static_cast<double>(s);
  if (sd * x_eval >= b) {
    const T e = std::exp(sd * lambda * x_eval);
    return {e, sd * lambda * e, sd * x_eval * e, (sd + lambda * x_eval) * e};
  }
  const double x0 = sd * b;
  const T l2 = lambda * lambda;
  constexpr std::size_t N = Deriv ? 4 : 2;
  using S = ode::State<T, N>;
  const auto stops = spec.interior_breakpoints();

  if (std::abs(std::real(lambda)) * 2.0 * b <= kMFormThreshold) {
    const T e0 = std::exp(lambda * b);
    S y{};
    y[0] = e0;
    y[1] = sd * lambda * e0;
    if constexpr (Deriv) {
      y[2] = b * e0;
      y[3] = sd * (1.0 + lambda * b) * e0;
    }
    auto rhs = [&](double x, const S& u, S& du) {
      const T q = spec(x) + l2;
      du[0] = u[1];
      du[1] = q * u[0];
      if constexpr (Deriv) {
        du[2] = u[3];
        du[3] = q * u[2] + 2.0 * lambda * u[0];
      }
    };
    const S r = ode::integrate<T, N>(rhs, y, x0, x_eval, stops, tol);
    if constexpr (Deriv) return {r[0], r[1], r[2], r[3]};
    else return {r[0], r[1], T{}, T{}};
  }

  // m form: f = m exp(s lambda x), m = 1 in the free region.
  const T two_sl = 2.0 * sd * lambda;
  S y{};
  y[0] = 1.0;
  auto rhs = [&](double x, const S& u, S& du) {
    const double v = spec(x);
    du[0] = u[1];
    du[1] = v * u[0] - two_sl * u[1];
    if constexpr (Deriv) {
      du[2] = u[3];
      du[3] = v * u[2] - two_sl * u[3] - 2.0 * sd * u[1];
    }
  };
  const S r = ode::integrate<T, N>(rhs, y, x0, x_eval, stops, tol);
  const T e = std::exp(sd * lambda * x_eval);
  const T m = r[0], mp = r[1];
  const T fp_over_e = mp + sd * lambda * m;
  Prop<T> out{m * e, fp_over_e * e, T{}, T{}};
  if constexpr (Deriv) {
    const T p = r[2], pp = r[3];
    out.df = (p + sd * x_eval * m) * e;
    out.dfp = (pp + sd * m + sd * lambda * p + sd * x_eval * fp_over_e) * e;
  }
  return out;
}

template <typename T>
T wr(const Prop<T>& a, const Prop<T>& b) {
  return a.f * b.fp - a.fp * b.f;
}

template <typename T>
double wr_scale(const Prop<T>& a, const Prop<T>& b) {
  return std::hypot(std::abs(a.f), std::abs(a.fp)) * std::hypot(std::abs(b.f), std::abs(b.fp));
}

// d/dlambda W(a(lambda), b(c lambda)) where b is evaluated at c lambda, c = +-1.
template <typename T>
T wr_derivative(const Prop<T>& a, const Prop<T>& b, double c) {
  return a.df * b.fp - a.dfp * b.f + c * (a.f * b.dfp - a.fp * b.df);
}

template <typename T>
struct Core {
  T value, dlambda;
  double scale;
};

template <typename T>
Core<T> target_core(const PotentialSpec& spec, Target target, T lambda, double x, const ode::Tolerance& tol) {
  switch (target) {
    case Target::W: {
      const auto a = propagate<T, true>(spec, lambda, -1, x, tol);
      const auto b = propagate<T, true>(spec, lambda, +1, x, tol);
      return {wr(a, b), wr_derivative(a, b, 1.0), wr_scale(a, b)};
    }
    case Target::SMinus: {
      const auto a = propagate<T, true>(spec, lambda, +1, x, tol);
      const auto b = propagate<T, true>(spec, T(-lambda), -1, x, tol);
      return {wr(a, b), wr_derivative(a, b, -1.0), wr_scale(a, b)};
    }
    case Target::SPlus: {
      // W(f+(-k), f-(k)) = -W(f-(k), f+(-k)); differentiate with f- leading.
      const auto a = propagate<T, true>(spec, lambda, -1, x, tol);
      const auto b = propagate<T, true>(spec, T(-lambda), +1, x, tol);
      return {-wr(a, b), -wr_derivative(a, b, -1.0), wr_scale(a, b)};
    }
  }
  return {};
}

}  // namespace

JostValue jost_plus(const PotentialSpec& spec, cplx k, double x_eval, const ode::Tolerance& tol) {
  const auto p = propagate<cplx, false>(spec, cplx(0, 1) * k, +1, x_eval, tol);
  return {p.f, p.fp, Side::Plus, x_eval};
}

JostValue jost_minus(const PotentialSpec& spec, cplx k, double x_eval, const ode::Tolerance& tol) {
  const auto p = propagate<cplx, false>(spec, cplx(0, 1) * k, -1, x_eval, tol);
  return {p.f, p.fp, Side::Minus, x_eval};
}

JostDerivative jost_with_derivative(const PotentialSpec& spec, Side side, cplx k, double x_eval,
                                    const ode::Tolerance& tol) {
  const cplx i(0, 1);
  const auto p = propagate<cplx, true>(spec, i * k, side == Side::Plus ? +1 : -1, x_eval, tol);
  return {p.f, p.fp, i * p.df, i * p.dfp};
}

ScatteringData scattering_data(const PotentialSpec& spec, cplx k, const ScatteringOptions& opts) {
  const cplx lambda = cplx(0, 1) * k;
  const double x = opts.x_match;
  const auto fp_k = propagate<cplx, false>(spec, lambda, +1, x, opts.tol);
  const auto fm_k = propagate<cplx, false>(spec, lambda, -1, x, opts.tol);
  const auto fp_mk = propagate<cplx, false>(spec, -lambda, +1, x, opts.tol);
  const auto fm_mk = propagate<cplx, false>(spec, -lambda, -1, x, opts.tol);

  ScatteringData d;
  d.k = k;
  d.w = wr(fm_k, fp_k);
  d.s_minus = wr(fp_k, fm_mk);
  d.s_plus = wr(fp_mk, fm_k);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (k != cplx(0.0) && d.w != cplx(0.0)) {
    d.t = 2.0 * cplx(0, 1) * k / d.w;
    d.r_minus = d.s_minus / d.w;
    d.r_plus = d.s_plus / d.w;
    d.coefficients_defined = true;
  } else {
    d.t = d.r_minus = d.r_plus = cplx(nan, nan);
  }
  return d;
}

double wronskian_on_axis(const PotentialSpec& spec, double kappa, const ode::Tolerance& tol) {
  const auto a = propagate<double, false>(spec, -kappa, -1, 0.0, tol);
  const auto b = propagate<double, false>(spec, -kappa, +1, 0.0, tol);
  return wr(a, b);
}

TargetValue evaluate_target(const PotentialSpec& spec, Target target, cplx k, const ode::Tolerance& tol) {
  const cplx i(0, 1);
  const auto c = target_core<cplx>(spec, target, i * k, 0.0, tol);
  return {c.value, i * c.dlambda, c.scale};
}

AxisValue evaluate_target_axis(const PotentialSpec& spec, Target target, double kappa, const ode::Tolerance& tol) {
  const auto c = target_core<double>(spec, target, -kappa, 0.0, tol);
  return {c.value, -c.dlambda, c.scale};
}

}  // namespace resbif
