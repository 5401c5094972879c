#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonlocal {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  DimensionMismatch,
  UnknownGame,
  ParseError,
  ValidationError,
  RangeError,
  TooLarge,
  NotPlanarApplicable,
  InvalidDistribution,
  AmbiguousDegenerate,
  NumericFailure,
};

std::string_view to_string(ErrorCode code);

// True for errors caused by bad user input (CLI exit code 2); the rest are
// numeric failures (exit code 1).
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nonlocal
