#include "qent/error.hpp"

namespace qent {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::FractionalPowerOfNegative: return "FractionalPowerOfNegative";
    case ErrorKind::NonFiniteKernel: return "NonFiniteKernel";
    case ErrorKind::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qent
