#include "resbif/nlsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "resbif/error.hpp"

namespace resbif {

BCSignature signature_for(Target target, double kappa) {
  const int s = kappa >= 0.0 ? 1 : -1;
  switch (target) {
    case Target::W: return {s, -s};
    case Target::SMinus: return {-s, -s};
    case Target::SPlus: return {s, s};
  }
  return {s, -s};
}

namespace {

std::vector<double> profile_stops(const PotentialSpec& spec, double x0, double x1, int n) {
  std::vector<double> stops;
  n = std::max(n, 2);
  for (int i = 1; i + 1 < n; ++i) stops.push_back(x0 + (x1 - x0) * i / (n - 1));
  for (double p : spec.interior_breakpoints())
    if (p > std::min(x0, x1) && p < std::max(x0, x1)) stops.push_back(p);
  return stops;
}

void require_evaluable(const PotentialSpec& spec) {
  if (spec.kind() == PotentialKind::DeltaClosedForm)
    throw Error(ErrorKind::DeltaNotEvaluable, "shooting needs a pointwise potential");
}

using Shot = ode::State<double, 9>;

}  // namespace

InnerSolution shoot(const PotentialSpec& spec, double kappa, double eps, BCSignature sig, const ShootOptions& opts) {
  require_evaluable(spec);
  if (kappa == 0.0) throw Error(ErrorKind::BCOutOfRange, "shooting needs kappa != 0", kappa);
  if (eps < 0.0) throw Error(ErrorKind::BCOutOfRange, "eps must be non-negative", eps);
  const double R0 = kappa * kappa - 0.5 * eps;
  if (!(R0 > 0.0)) throw Error(ErrorKind::BCOutOfRange, "kappa^2 <= eps/2 at the left boundary", kappa);
  const double b = spec.half_width();
  const double sq0 = std::sqrt(R0);
  const double k2 = kappa * kappa;

  Shot y{};
  y[0] = 1.0;
  y[1] = sig.sigma_L * sq0;
  y[6] = sig.sigma_L * kappa / sq0;
  y[8] = -sig.sigma_L / (4.0 * sq0);
  auto rhs = [&](double x, const Shot& s, Shot& d) {
    const double v = spec(x);
    const double U = s[0];
    const double lin = v + k2 - 3.0 * eps * U * U;
    d[0] = s[1];
    d[1] = (v + k2) * U - eps * U * U * U;
    d[2] = U * U;
    d[3] = U * U * U * U;
    d[4] = s[1] * s[1];
    d[5] = s[6];
    d[6] = lin * s[5] + 2.0 * kappa * U;
    d[7] = s[8];
    d[8] = lin * s[7] - U * U * U;
  };

  InnerSolution sol;
  sol.kappa = kappa;
  sol.E = -k2;
  sol.eps = eps;
  sol.signature = sig;
  const auto stops = profile_stops(spec, -b, b, opts.grid_points);
  auto observe = [&](double x, const Shot& s) {
    sol.grid.push_back(x);
    sol.u.push_back(s[0]);
    sol.u_prime.push_back(s[1]);
  };
  const Shot r = ode::integrate<double, 9>(rhs, y, -b, b, stops, opts.tol, observe);

  const double U = r[0], Up = r[1], Y = r[5], Yp = r[6], Z = r[7], Zp = r[8];
  const double R = k2 - 0.5 * eps * U * U;
  sol.int_u2 = r[2];
  sol.int_u4 = r[3];
  sol.int_up2 = r[4];
  if (R < 0.0) throw Error(ErrorKind::BCOutOfRange, "kappa^2 - (eps/2) U(b)^2 < 0", kappa);
  const double sq = std::sqrt(R);
  const double sR = sig.sigma_R;
  sol.residual_F = Up - sR * U * sq;
  if (sq > 0.0) {
    sol.dF_dkappa = Yp - sR * (Y * sq + U * (kappa - 0.5 * eps * U * Y) / sq);
    sol.dF_deps = Zp - sR * (Z * sq + U * (-0.5 * U * U - eps * U * Z) / (2.0 * sq));
  } else {
    sol.dF_dkappa = sol.dF_deps = std::numeric_limits<double>::infinity();
  }
  return sol;
}

InnerSolution solve_kappa(const PotentialSpec& spec, double eps, BCSignature sig, double kappa_guess,
                          const ShootOptions& opts) {
  double kappa = kappa_guess;
  InnerSolution sol = shoot(spec, kappa, eps, sig, opts);
  auto converged = [](const InnerSolution& s) {
    return std::abs(s.residual_F) < 1e-10 * (1.0 + std::abs(s.u_right()) * std::abs(s.kappa));
  };
  for (int it = 0; it < 50; ++it) {
    if (converged(sol)) return sol;
    if (!(std::abs(sol.dF_dkappa) > 1e-8) || !std::isfinite(sol.dF_dkappa))
      throw Error(ErrorKind::Degenerate, "dF/dkappa vanishes", kappa);
    double step = -sol.residual_F / sol.dF_dkappa;
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving) {
      const double trial = kappa + step;
      if ((trial > 0.0) == (kappa > 0.0) && trial != 0.0) {
        try {
          sol = shoot(spec, trial, eps, sig, opts);
          kappa = trial;
          accepted = true;
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::BCOutOfRange) throw;
        }
      }
      step *= 0.5;
    }
    if (!accepted) throw Error(ErrorKind::BCOutOfRange, "no admissible Newton step", kappa);
    if (std::abs(step) < 1e-15 * std::abs(kappa) &&
        std::abs(sol.residual_F) < 1e-8 * (1.0 + std::abs(sol.u_right()) * std::abs(sol.kappa)))
      return sol;
  }
  if (converged(sol)) return sol;
  throw Error(ErrorKind::NewtonDiverged, "kappa Newton did not converge in 50 iterations", kappa);
}

double dF_dkappa_formula(const SpectralPoint& point) {
  if (!on_axis(point.k_star) || point.k_star.imag() == 0.0)
    throw Error(ErrorKind::NotOnAxis, "formula needs a nonzero purely imaginary zero");
  if (!point.mode) throw Error(ErrorKind::NotOnAxis, "point carries no mode trace");
  return point.nondegeneracy / point.mode->U_at_plus_b;
}

InnerSolution shoot_threshold(const PotentialSpec& spec, double E, double eps, Parity parity,
                              const ShootOptions& opts) {
  require_evaluable(spec);
  if (parity == Parity::None) throw Error(ErrorKind::Config, "threshold shooting needs a parity");
  if (!spec.is_even()) throw Error(ErrorKind::NotSymmetric, "threshold problem needs an even potential");
  const double b = spec.half_width();
  Shot y{};
  if (parity == Parity::Even) y[0] = 1.0;
  else y[1] = 1.0;
  auto rhs = [&](double x, const Shot& s, Shot& d) {
    const double v = spec(x);
    const double U = s[0];
    const double lin = v - E - 3.0 * eps * U * U;
    d[0] = s[1];
    d[1] = (v - E) * U - eps * U * U * U;
    d[2] = U * U;
    d[3] = U * U * U * U;
    d[4] = s[1] * s[1];
    d[5] = s[6];
    d[6] = lin * s[5] - U;
    d[7] = s[8];
    d[8] = lin * s[7] - U * U * U;
  };
  std::vector<double> xs, us, ups;
  auto observe = [&](double x, const Shot& s) {
    xs.push_back(x);
    us.push_back(s[0]);
    ups.push_back(s[1]);
  };
  const auto stops = profile_stops(spec, 0.0, b, (opts.grid_points + 1) / 2);
  const Shot r = ode::integrate<double, 9>(rhs, y, 0.0, b, stops, opts.tol, observe);

  InnerSolution sol;
  sol.E = E;
  sol.kappa = E < 0.0 ? std::sqrt(-E) : 0.0;
  sol.eps = eps;
  sol.threshold = true;
  sol.parity = parity;
  const double p = parity == Parity::Even ? 1.0 : -1.0;
  for (std::size_t i = xs.size(); i-- > 1;) {
    sol.grid.push_back(-xs[i]);
    sol.u.push_back(p * us[i]);
    sol.u_prime.push_back(-p * ups[i]);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sol.grid.push_back(xs[i]);
    sol.u.push_back(us[i]);
    sol.u_prime.push_back(ups[i]);
  }
  const double U = r[0], Up = r[1], Y = r[5], Yp = r[6], Z = r[7], Zp = r[8];
  sol.int_u2 = 2.0 * r[2];
  sol.int_u4 = 2.0 * r[3];
  sol.int_up2 = 2.0 * r[4];
  sol.residual_F = Up * Up + E * U * U + 0.5 * eps * U * U * U * U;
  sol.dF_dE = 2.0 * Up * Yp + U * U + 2.0 * E * U * Y + 2.0 * eps * U * U * U * Y;
  sol.dF_deps = 2.0 * Up * Zp + 2.0 * E * U * Z + 0.5 * U * U * U * U + 2.0 * eps * U * U * U * Z;
  const int sR = (Up * U > 0.0) ? 1 : -1;
  sol.signature = {-sR, sR};
  return sol;
}

InnerSolution solve_threshold_symmetric(const PotentialSpec& spec, double eps, Parity parity, double E_guess,
                                        const ShootOptions& opts) {
  if (!(E_guess < 0.0)) throw Error(ErrorKind::BCOutOfRange, "threshold solve needs E_guess < 0", E_guess);
  double E = E_guess;
  InnerSolution sol = shoot_threshold(spec, E, eps, parity, opts);
  // Size of the individual terms of F; near E = 0 all of them are O(eps).
  auto scale = [](const InnerSolution& s) {
    const double U = s.u_right(), Up = s.up_right();
    return Up * Up + std::abs(s.E) * U * U + 0.5 * s.eps * U * U * U * U;
  };
  for (int it = 0; it < 50; ++it) {
    if (std::abs(sol.residual_F) <= 1e-15 * scale(sol)) return sol;
    if (!(std::abs(sol.dF_dE) > 0.0) || !std::isfinite(sol.dF_dE))
      throw Error(ErrorKind::Degenerate, "dF/dE vanishes", E);
    double step = -sol.residual_F / sol.dF_dE;
    int halving = 0;
    while (!(E + step < 0.0) && halving++ < 30) step *= 0.5;
    if (!(E + step < 0.0)) throw Error(ErrorKind::NewtonDiverged, "E iterate left E < 0", E);
    E += step;
    sol = shoot_threshold(spec, E, eps, parity, opts);
    // Converged to rounding.
    if (std::abs(step) <= 4e-16 * std::abs(E) && std::abs(sol.residual_F) < 1e-12 * std::max(1.0, scale(sol)))
      return sol;
  }
  if (std::abs(sol.residual_F) < 1e-12 * std::max(1.0, scale(sol)) && std::abs(sol.residual_F) < 1e-9 * scale(sol))
    return sol;
  throw Error(ErrorKind::NewtonDiverged, "E Newton did not converge in 50 iterations", E);
}

}  // namespace resbif
