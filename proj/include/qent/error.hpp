#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qent {

enum class ErrorKind {
  NotHermitian,
  NotPositive,
  TraceNotOne,
  NotNormalized,
  DimensionMismatch,
  ConstraintViolation,
  ConvergenceFailure,
  DomainError,
  FractionalPowerOfNegative,
  NonFiniteKernel,
  NonPositiveDeterminant,
  TruncationInsufficient,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Error carrying a machine-readable kind. The message names the violated
/// invariant and, where one exists, the measured defect.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qent
