#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace resbif {

enum class PotentialKind { SquareWell, SmoothWell, PiecewiseCubic, DeltaClosedForm };

const char* to_string(PotentialKind kind);

struct EnvelopeMax {
  double value = 0.0;
  double argmax = 0.0;
};

// A real potential supported on [-b, b]. Immutable once built; every copy is
// safe to share across threads.
//
//   SquareWell      V = -alpha on |x| <= b
//   SmoothWell      V = -alpha W(x; beta) / max W on |x| <= 1,
//                   W(x; beta) = exp(-(x - beta)^2 / 4) (1 + cos(pi x)) / 2
//   PiecewiseCubic  cubic c0 + c1 t + c2 t^2 + c3 t^3, t = x - x_i, on each cell
//   DeltaClosedForm alpha * delta(x); only the closed-form oracles use it
class PotentialSpec {
 public:
  static PotentialSpec square_well(double alpha, double b);
  static PotentialSpec smooth_well(double alpha, double beta);
  static PotentialSpec piecewise_cubic(std::vector<double> breakpoints,
                                       std::vector<std::array<double, 4>> coeffs);
  static PotentialSpec delta(double alpha);
  static PotentialSpec zero(double b = 1.0) { return square_well(0.0, b); }

  PotentialKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double half_width() const noexcept { return b_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<std::array<double, 4>>& coeffs() const noexcept { return coeffs_; }

  // Cached normaliser max W(x; beta) of the smooth well.
  double envelope_max() const noexcept { return envelope_max_; }

  // Interior points where V or one of its derivatives may jump; integrators
  // must stop there.
  std::span<const double> interior_breakpoints() const noexcept { return interior_; }

  // Same family, new strength. Used by parameter sweeps.
  PotentialSpec with_alpha(double alpha) const;

  // V(x) = V(-x) on a 2001-point symmetric grid to within tol.
  bool is_even(double tol = 1e-10) const;

  double operator()(double x) const noexcept { return value(x); }

 private:
  PotentialSpec() = default;
  double value(double x) const noexcept;
  friend double evaluate(const PotentialSpec&, double);

  PotentialKind kind_ = PotentialKind::SquareWell;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double b_ = 1.0;
  double envelope_max_ = 1.0;
  std::vector<double> breakpoints_;
  std::vector<std::array<double, 4>> coeffs_;
  std::vector<double> interior_;
};

// V(x), exactly 0 for |x| > b. Throws DeltaNotEvaluable for the delta kind.
double evaluate(const PotentialSpec& spec, double x);

// Envelope of the smooth well before normalisation.
double smooth_envelope(double x, double beta) noexcept;

// max over |x| <= 1 of W(x; beta): coarse grid followed by golden-section
// refinement.
EnvelopeMax envelope_maximum(double beta);

// Throws WrongKind unless spec is a SmoothWell.
double max_of_envelope(const PotentialSpec& spec);

// Descriptor I/O:
// {"kind": "square_well"|"smooth_well"|"piecewise"|"delta", "alpha", "beta",
//  "b", "breakpoints": [...], "coeffs": [[c0,c1,c2,c3], ...] or flat}
PotentialSpec potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const PotentialSpec& spec);
// Stable 64-bit FNV-1a of the canonical descriptor, as 16 hex digits.
std::string descriptor_hash(const PotentialSpec& spec);

}  // namespace resbif
