#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "resbif/error.hpp"
#include "resbif/scattering.hpp"

namespace resbif {

enum class SpectralClass { BoundStatePole, AntiBoundState, ComplexResonance, TransmissionResonance, ThresholdResonance };
enum class Parity { None, Even, Odd };

const char* to_string(SpectralClass cls);
const char* to_string(Parity parity);

struct ModeTrace {
  double U_at_minus_b = 0.0;
  double U_at_plus_b = 0.0;
  double int_U2 = 0.0;
  double int_U4 = 0.0;
};

struct SpectralPoint {
  cplx k_star;
  Target target = Target::W;
  SpectralClass cls = SpectralClass::BoundStatePole;
  // |target(k_star)| after polishing, and the scale it is judged against.
  double residual = 0.0;
  double scale = 0.0;
  double derivative_abs = 0.0;
  bool converged = true;
  // |target'(k_star)| > 1e-6 scale.
  bool simple = true;
  std::optional<ModeTrace> mode;
  double nondegeneracy = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;
  Parity parity = Parity::None;

  double kappa() const { return k_star.imag(); }
};

struct Box {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
};

struct SpectrumOptions {
  ode::Tolerance tol{};
  int jobs = 1;
  // Radius around kappa = 0 excluded from axis scans.
  double axis_exclusion = 1e-3;
};

// |Re k| < 1e-6 (1 + |k|).
bool on_axis(cplx k);

// Classification of a zero of `target` at k.
SpectralClass classify(Target target, cplx k);

// Sign changes of the real axis restriction, refined by bisection and then
// Newton to |dkappa| < 1e-12. Sorted by kappa.
std::vector<SpectralPoint> scan_axis(const PotentialSpec& spec, Target target, double kappa_min, double kappa_max,
                                     int n_grid, const SpectrumOptions& opts = {});

// Winding number of target around the rectangle (argument principle).
// Inflates the box by 1% up to three times when a boundary sample is within
// 1e-8 scale of zero; throws BoundaryZero after that.
int count_zeros_box(const PotentialSpec& spec, Target target, const Box& box, const SpectrumOptions& opts = {});

class DepthExceededError : public Error {
 public:
  DepthExceededError(std::vector<SpectralPoint> partial)
      : Error(ErrorKind::DepthExceeded, "box subdivision limit reached"), partial_(std::move(partial)) {}
  const std::vector<SpectralPoint>& partial() const noexcept { return partial_; }

 private:
  std::vector<SpectralPoint> partial_;
};

// Recursive subdivision to boxes holding one zero, then complex Newton.
// Sorted by (Im k, Re k).
std::vector<SpectralPoint> locate_complex_zeros(const PotentialSpec& spec, Target target, const Box& box,
                                                int max_depth = 12, const SpectrumOptions& opts = {});

// Threshold resonance: |w(0)| < 1e-6 max|w| over |k| = 0.5. For even
// potentials the zero-energy mode's parity is filled in.
std::optional<SpectralPoint> detect_threshold(const PotentialSpec& spec, const SpectrumOptions& opts = {});

// Fills mode_trace, nondegeneracy and the degenerate flag (|nd| < 1e-8).
// Throws NotOnAxis unless k_star is purely imaginary and nonzero.
SpectralPoint mode_and_nondegeneracy(const PotentialSpec& spec, SpectralPoint point,
                                     const ode::Tolerance& tol = {});

// Bisection on alpha for a sign change of w(0; alpha) inside [alpha_lo, alpha_hi].
double bisect_threshold_alpha(const PotentialSpec& family, double alpha_lo, double alpha_hi, double tol = 1e-10);

}  // namespace resbif
