#pragma once

#include <stdexcept>
#include <string>

namespace fmopt {

enum class ErrorKind {
  InvalidDimension,
  InvalidLag,
  InvalidArgument,
  BudgetExceeded,
  EmptyDataset,
  NumericFailure,
  InfeasibleUniqueness,
  Sequencing,
  ReferenceValue,
  Config,
  Io,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidLag: return "invalid-lag";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::EmptyDataset: return "empty-dataset";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::InfeasibleUniqueness: return "infeasible-uniqueness";
    case ErrorKind::Sequencing: return "sequencing";
    case ErrorKind::ReferenceValue: return "reference-value";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "error";
}

/// Library-wide exception. `kind()` drives the CLI exit-code mapping
/// (config -> 2, budget -> 4, everything else -> 3).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fmopt
