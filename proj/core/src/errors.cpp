#include "nestline/errors.hpp"

namespace nestline {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DoesNotFit: return "DoesNotFit";
    case ErrorCode::NoSeparator: return "NoSeparator";
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::AllStartsFailed: return "AllStartsFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace nestline
