#include "nnecon/errors.hpp"

namespace nnecon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMarket: return "InvalidMarket";
    case ErrorCode::InfeasibleMarket: return "InfeasibleMarket";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::NoFiniteCrossing: return "NoFiniteCrossing";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::NonpositiveUtility: return "NonpositiveUtility";
    case ErrorCode::NoInteriorSolution: return "NoInteriorSolution";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace nnecon
