#pragma once

#include <complex>
#include <optional>

#include "resbif/ode.hpp"
#include "resbif/potential.hpp"

namespace resbif {

using cplx = std::complex<double>;

enum class Side { Plus, Minus };

// Zeros of W are poles of t, r; zeros of SMinus / SPlus are transmission
// resonances.
enum class Target { W, SMinus, SPlus };

const char* to_string(Target target);

struct JostValue {
  cplx f;
  cplx f_prime;
  Side side = Side::Plus;
  double x = 0.0;
};

// Jost value together with its k-derivative, from the variational system.
struct JostDerivative {
  cplx f, f_prime;
  cplx df_dk, df_prime_dk;
};

struct ScatteringData {
  cplx k;
  cplx w, s_minus, s_plus;
  // Undefined (NaN) when k = 0 or w = 0.
  cplx t, r_minus, r_plus;
  bool coefficients_defined = false;
};

struct ScatteringOptions {
  ode::Tolerance tol{};
  // Common point at which the Wronskians are formed.
  double x_match = 0.0;
};

// |Im k| * 2b above which the propagation switches to m = f e^{-+ikx}.
inline constexpr double kMFormThreshold = 20.0;

JostValue jost_plus(const PotentialSpec& spec, cplx k, double x_eval, const ode::Tolerance& tol = {});
JostValue jost_minus(const PotentialSpec& spec, cplx k, double x_eval, const ode::Tolerance& tol = {});

JostDerivative jost_with_derivative(const PotentialSpec& spec, Side side, cplx k, double x_eval,
                                    const ode::Tolerance& tol = {});

ScatteringData scattering_data(const PotentialSpec& spec, cplx k, const ScatteringOptions& opts = {});

// w(i kappa), real for real V.
double wronskian_on_axis(const PotentialSpec& spec, double kappa, const ode::Tolerance& tol = {});

// Target value and dTarget/dk. `scale` is |(a, a')| |(b, b')| for the
// Wronskian W(a, b) being formed; it sets the size against which "zero" is
// judged.
struct TargetValue {
  cplx value;
  cplx derivative;
  double scale = 0.0;
};

TargetValue evaluate_target(const PotentialSpec& spec, Target target, cplx k, const ode::Tolerance& tol = {});

// Restriction to k = i kappa. Every value there is real; the derivative is
// with respect to kappa.
struct AxisValue {
  double value = 0.0;
  double derivative = 0.0;
  double scale = 0.0;
};

AxisValue evaluate_target_axis(const PotentialSpec& spec, Target target, double kappa,
                               const ode::Tolerance& tol = {});

}  // namespace resbif
