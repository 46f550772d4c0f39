#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace resbif {

enum class ErrorKind {
  DeltaNotEvaluable,
  WrongKind,
  InvalidPotential,
  IntegrationFailure,
  NotOnAxis,
  BoundaryZero,
  DepthExceeded,
  BCOutOfRange,
  NewtonDiverged,
  Degenerate,
  NotSymmetric,
  LogDerivOutOfRange,
  ZeroBoundaryValue,
  AboveThreshold,
  NoThreshold,
  Config,
};

const char* to_string(ErrorKind kind);

// Library-wide exception. `where` carries a location when one is meaningful
// (last accepted abscissa for IntegrationFailure, the offending kappa, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        double where = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  double where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  double where_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DeltaNotEvaluable: return "DeltaNotEvaluable";
    case ErrorKind::WrongKind: return "WrongKind";
    case ErrorKind::InvalidPotential: return "InvalidPotential";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::NotOnAxis: return "NotOnAxis";
    case ErrorKind::BoundaryZero: return "BoundaryZero";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::BCOutOfRange: return "BCOutOfRange";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::LogDerivOutOfRange: return "LogDerivOutOfRange";
    case ErrorKind::ZeroBoundaryValue: return "ZeroBoundaryValue";
    case ErrorKind::AboveThreshold: return "AboveThreshold";
    case ErrorKind::NoThreshold: return "NoThreshold";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace resbif
