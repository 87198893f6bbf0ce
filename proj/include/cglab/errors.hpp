// errors.hpp - shared error taxonomy for the workbench.
#pragma once

#include <stdexcept>
#include <string>

namespace cglab {

enum class ErrorCode {
  PointOutsideDomain,
  SingularMetric,
  DerivativeUnavailable,
  QuadratureOverflow,
  MassOutOfRange,
  NonFiniteProfile,
  DegenerateGradient,
  GradientBlowup,
  StepTooLarge,
  NotAdmissible,
  GridMismatch,
  NoConcentration,
  InconsistentFamily,
  IterationBoundExceeded,
  RicciNotNonnegative,
  UnknownChart,
  InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorCode::QuadratureOverflow: return "QuadratureOverflow";
    case ErrorCode::MassOutOfRange: return "MassOutOfRange";
    case ErrorCode::NonFiniteProfile: return "NonFiniteProfile";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::GradientBlowup: return "GradientBlowup";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NoConcentration: return "NoConcentration";
    case ErrorCode::InconsistentFamily: return "InconsistentFamily";
    case ErrorCode::IterationBoundExceeded: return "IterationBoundExceeded";
    case ErrorCode::RicciNotNonnegative: return "RicciNotNonnegative";
    case ErrorCode::UnknownChart: return "UnknownChart";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace cglab
