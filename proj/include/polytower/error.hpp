#pragma once

#include <stdexcept>
#include <string>

namespace polytower {

enum class ErrorCode {
  InvalidInput,
  Parse,
  DuplicateVertex,
  EmptySimplex,
  UnknownVertex,
  NotSubcomplex,
  NotSimplicial,
  ScaleMismatch,
  ComplexMismatch,
  IndexMismatch,
  TypeMismatch,
  DomainError,
};

const char* to_string(ErrorCode code);

/// Every recoverable failure in the library is reported through this type.
/// `context` names the offending field or simplex when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace polytower
