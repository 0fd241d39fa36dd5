#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nestline {

enum class ErrorCode {
  SelfIntersecting,
  Degenerate,
  DoesNotFit,
  NoSeparator,
  EmptyInstance,
  DimensionMismatch,
  NonFiniteEvaluation,
  AllStartsFailed,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nestline
