#pragma once

// Nonlinear boundary-value problem on [-b, b]:
//   U'' = (V + kappa^2) U - eps U^3,
//   U'(+-b) = sigma U sqrt(kappa^2 - (eps/2) U^2)  at each end,
// solved by shooting from -b with U(-b) = 1, and its symmetric threshold
// variant in E = -kappa^2 shot from x = 0.

#include <vector>

#include "resbif/spectrum.hpp"

namespace resbif {

struct BCSignature {
  int sigma_L = 1;
  int sigma_R = -1;
  bool operator==(const BCSignature&) const = default;
};

// W: (sgn k, -sgn k); SMinus: (-sgn k, -sgn k); SPlus: (sgn k, sgn k).
BCSignature signature_for(Target target, double kappa);

struct InnerSolution {
  double kappa = 0.0;
  double E = 0.0;
  double eps = 0.0;
  BCSignature signature;
  bool threshold = false;
  Parity parity = Parity::None;

  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> u_prime;

  double residual_F = 0.0;
  // Generic problem: dF/dkappa, dF/deps. Threshold problem: dF/dE, dF/deps.
  double dF_dkappa = 0.0;
  double dF_deps = 0.0;
  double dF_dE = 0.0;

  double int_u2 = 0.0;
  double int_u4 = 0.0;
  double int_up2 = 0.0;

  double u_left() const { return u.front(); }
  double u_right() const { return u.back(); }
  double up_left() const { return u_prime.front(); }
  double up_right() const { return u_prime.back(); }
};

struct ShootOptions {
  ode::Tolerance tol{};
  // Uniform profile grid on [-b, b]; interior breakpoints are added to it.
  int grid_points = 401;
};

// u'^2 + (eps/2) u^4 + E u^2, which vanishes on soliton flanks.
inline double flux(double u, double up, double E, double eps) { return up * up + 0.5 * eps * u * u * u * u + E * u * u; }

InnerSolution shoot(const PotentialSpec& spec, double kappa, double eps, BCSignature sig,
                    const ShootOptions& opts = {});

// Newton on kappa at fixed eps, with step halving on BCOutOfRange (up to 30).
InnerSolution solve_kappa(const PotentialSpec& spec, double eps, BCSignature sig, double kappa_guess,
                          const ShootOptions& opts = {});

// Closed-form dF/dkappa at (kappa_star, 0): nondegeneracy / U_star(b).
double dF_dkappa_formula(const SpectralPoint& point);

// Threshold problem: shoot from x = 0 with (U, U')(0) = (1, 0) for Even and
// (0, 1) for Odd; F = U'(b)^2 + E U(b)^2 + (eps/2) U(b)^4.
InnerSolution shoot_threshold(const PotentialSpec& spec, double E, double eps, Parity parity,
                              const ShootOptions& opts = {});

InnerSolution solve_threshold_symmetric(const PotentialSpec& spec, double eps, Parity parity, double E_guess,
                                        const ShootOptions& opts = {});

}  // namespace resbif
