#pragma once

#include <stdexcept>
#include <string>

namespace pfm {

enum class ErrorCode {
  NotStochastic,
  Singular,
  NotReversible,
  DisconnectedFrame,
  NoConvergence,
  ProbabilityOverflow,
  EmptyCluster,
  InvalidSpec,
  InvalidProbability,
  ZeroDegreeRow,
  ZeroDegreeNode,
  EigensolverFailure,
  DegenerateInput,
  SizeMismatch,
  DimensionMismatch,
  FrameMismatch,
  CertificateViolation,
  AssumptionViolated,
  ConfigError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::DisconnectedFrame: return "DisconnectedFrame";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ProbabilityOverflow: return "ProbabilityOverflow";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::ZeroDegreeRow: return "ZeroDegreeRow";
    case ErrorCode::ZeroDegreeNode: return "ZeroDegreeNode";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class PfmError : public std::runtime_error {
 public:
  PfmError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw PfmError(code, what);
}

}  // namespace pfm
