#include "resbif/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "resbif/error.hpp"

namespace resbif {

const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::SquareWell: return "square_well";
    case PotentialKind::SmoothWell: return "smooth_well";
    case PotentialKind::PiecewiseCubic: return "piecewise";
    case PotentialKind::DeltaClosedForm: return "delta";
  }
  return "unknown";
}

double smooth_envelope(double x, double beta) noexcept {
  return std::exp(-0.25 * (x - beta) * (x - beta)) * 0.5 * (1.0 + std::cos(std::numbers::pi * x));
}

EnvelopeMax envelope_maximum(double beta) {
  constexpr int n = 2001;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * i / (n - 1);
    const double v = smooth_envelope(x, beta);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = -1.0 + 2.0 * std::max(best - 1, 0) / (n - 1);
  double hi = -1.0 + 2.0 * std::min(best + 1, n - 1) / (n - 1);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = smooth_envelope(x1, beta), f2 = smooth_envelope(x2, beta);
  while (hi - lo > 1e-13) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = smooth_envelope(x2, beta);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = smooth_envelope(x1, beta);
    }
  }
  const double xm = 0.5 * (lo + hi);
  EnvelopeMax out{smooth_envelope(xm, beta), xm};
  if (best_value > out.value) out = {best_value, -1.0 + 2.0 * best / (n - 1)};
  return out;
}

PotentialSpec PotentialSpec::square_well(double alpha, double b) {
  if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(alpha))
    throw Error(ErrorKind::InvalidPotential, "square well needs finite alpha and b > 0");
  PotentialSpec s;
  s.kind_ = PotentialKind::SquareWell;
  s.alpha_ = alpha;
  s.b_ = b;
  return s;
}

PotentialSpec PotentialSpec::smooth_well(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw Error(ErrorKind::InvalidPotential, "smooth well needs finite alpha and beta");
  PotentialSpec s;
  s.kind_ = PotentialKind::SmoothWell;
  s.alpha_ = alpha;
  s.beta_ = beta;
  s.b_ = 1.0;
  s.envelope_max_ = envelope_maximum(beta).value;
  if (!(s.envelope_max_ > 0.0))
    throw Error(ErrorKind::InvalidPotential, "envelope underflows for this beta");
  return s;
}

PotentialSpec PotentialSpec::piecewise_cubic(std::vector<double> breakpoints,
                                             std::vector<std::array<double, 4>> coeffs) {
  if (breakpoints.size() < 2 || coeffs.size() + 1 != breakpoints.size())
    throw Error(ErrorKind::InvalidPotential, "piecewise cubic needs n+1 breakpoints for n cells");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw Error(ErrorKind::InvalidPotential, "breakpoints must be strictly increasing");
  const double b = breakpoints.back();
  if (!(b > 0.0) || std::abs(breakpoints.front() + b) > 1e-12 * b)
    throw Error(ErrorKind::InvalidPotential, "breakpoints must span a symmetric support [-b, b]");
  for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i) {
    const auto& c = coeffs[i - 1];
    const double t = breakpoints[i] - breakpoints[i - 1];
    const double left = c[0] + t * (c[1] + t * (c[2] + t * c[3]));
    if (std::abs(left - coeffs[i][0]) > 1e-8)
      throw Error(ErrorKind::InvalidPotential, "piecewise cubic is discontinuous at an interior breakpoint",
                  breakpoints[i]);
  }
  PotentialSpec s;
  s.kind_ = PotentialKind::PiecewiseCubic;
  s.b_ = b;
  s.breakpoints_ = std::move(breakpoints);
  s.coeffs_ = std::move(coeffs);
  s.interior_.assign(s.breakpoints_.begin() + 1, s.breakpoints_.end() - 1);
  return s;
}

PotentialSpec PotentialSpec::delta(double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorKind::InvalidPotential, "delta strength must be finite");
  PotentialSpec s;
  s.kind_ = PotentialKind::DeltaClosedForm;
  s.alpha_ = alpha;
  s.b_ = 0.0;
  return s;
}

PotentialSpec PotentialSpec::with_alpha(double alpha) const {
  switch (kind_) {
    case PotentialKind::SquareWell: return square_well(alpha, b_);
    case PotentialKind::SmoothWell: {
      PotentialSpec s = *this;
      s.alpha_ = alpha;
      return s;
    }
    case PotentialKind::DeltaClosedForm: return delta(alpha);
    case PotentialKind::PiecewiseCubic: {
      // Piecewise wells scale linearly in alpha relative to alpha = 1.
      PotentialSpec s = *this;
      const double ratio = alpha_ == 0.0 ? alpha : alpha / alpha_;
      for (auto& c : s.coeffs_)
        for (double& v : c) v *= ratio;
      s.alpha_ = alpha;
      return s;
    }
  }
  return *this;
}

double PotentialSpec::value(double x) const noexcept {
  if (std::abs(x) > b_) return 0.0;
  switch (kind_) {
    case PotentialKind::SquareWell: return -alpha_;
    case PotentialKind::SmoothWell: return -alpha_ * smooth_envelope(x, beta_) / envelope_max_;
    case PotentialKind::PiecewiseCubic: {
      auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
      std::size_t cell = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
      cell = std::min(cell, coeffs_.size() - 1);
      const auto& c = coeffs_[cell];
      const double t = x - breakpoints_[cell];
      return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
    }
    case PotentialKind::DeltaClosedForm: return 0.0;
  }
  return 0.0;
}

double evaluate(const PotentialSpec& spec, double x) {
  if (spec.kind() == PotentialKind::DeltaClosedForm)
    throw Error(ErrorKind::DeltaNotEvaluable, "the delta potential has no pointwise value");
  return spec.value(x);
}

bool PotentialSpec::is_even(double tol) const {
  if (kind_ == PotentialKind::DeltaClosedForm) return true;
  constexpr int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double x = b_ * (-1.0 + 2.0 * i / (n - 1));
    if (std::abs(value(x) - value(-x)) > tol) return false;
  }
  return true;
}

double max_of_envelope(const PotentialSpec& spec) {
  if (spec.kind() != PotentialKind::SmoothWell)
    throw Error(ErrorKind::WrongKind, "envelope maximum is defined for the smooth well only");
  return envelope_maximum(spec.beta()).value;
}

PotentialSpec potential_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "square_well") return PotentialSpec::square_well(j.at("alpha").get<double>(), j.value("b", 1.0));
    if (kind == "smooth_well") {
      if (j.contains("b") && j.at("b").get<double>() != 1.0)
        throw Error(ErrorKind::Config, "smooth_well is defined on |x| <= 1; b must be 1");
      return PotentialSpec::smooth_well(j.at("alpha").get<double>(), j.value("beta", 0.0));
    }
    if (kind == "delta") return PotentialSpec::delta(j.at("alpha").get<double>());
    if (kind == "piecewise") {
      auto breakpoints = j.at("breakpoints").get<std::vector<double>>();
      std::vector<std::array<double, 4>> coeffs;
      const auto& c = j.at("coeffs");
      if (!c.empty() && c.front().is_array()) {
        coeffs = c.get<std::vector<std::array<double, 4>>>();
      } else {
        auto flat = c.get<std::vector<double>>();
        if (flat.size() % 4 != 0) throw Error(ErrorKind::Config, "flat coeffs must hold 4 values per cell");
        for (std::size_t i = 0; i < flat.size(); i += 4) coeffs.push_back({flat[i], flat[i + 1], flat[i + 2], flat[i + 3]});
      }
      return PotentialSpec::piecewise_cubic(std::move(breakpoints), std::move(coeffs));
    }
    throw Error(ErrorKind::Config, "unknown potential kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad potential descriptor: ") + e.what());
  }
}

nlohmann::json potential_to_json(const PotentialSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind());
  j["alpha"] = spec.alpha();
  switch (spec.kind()) {
    case PotentialKind::SquareWell: j["b"] = spec.half_width(); break;
    case PotentialKind::SmoothWell:
      j["beta"] = spec.beta();
      j["b"] = 1.0;
      break;
    case PotentialKind::PiecewiseCubic:
      j["b"] = spec.half_width();
      j["breakpoints"] = spec.breakpoints();
      j["coeffs"] = spec.coeffs();
      break;
    case PotentialKind::DeltaClosedForm: j["b"] = 0.0; break;
  }
  return j;
}

std::string descriptor_hash(const PotentialSpec& spec) {
  const std::string text = potential_to_json(spec).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace resbif
