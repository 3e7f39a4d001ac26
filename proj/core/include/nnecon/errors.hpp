#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nnecon {

enum class ErrorCode {
  InvalidArgument,
  InvalidMarket,
  InfeasibleMarket,
  NoBracket,
  NoConvergence,
  MonotonicityViolation,
  NoFiniteCrossing,
  RegimeMismatch,
  NonpositiveUtility,
  NoInteriorSolution,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is
/// stable and meant for programmatic dispatch; what() carries detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nnecon
