#include "nonlocal/errors.hpp"

namespace nonlocal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownGame: return "UnknownGame";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotPlanarApplicable: return "NotPlanarApplicable";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::AmbiguousDegenerate: return "AmbiguousDegenerate";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownGame:
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::RangeError:
    case ErrorCode::TooLarge:
    case ErrorCode::NotPlanarApplicable:
    case ErrorCode::InvalidDistribution:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace nonlocal
