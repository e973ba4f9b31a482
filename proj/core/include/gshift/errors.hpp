#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gshift {

enum class ErrorCode {
  Precondition,
  ModeMismatch,
  DependentBasis,
  LocalityViolation,
  Unbounded,
  HorizonTooShort,
  NotFoundWithinHorizon,
  ExceededBound,
  InsufficientChain,
  SingularCoefficient,
  NotNilpotentModulo,
  NotInGeneralizedKernel,
  ProviderExhausted,
  CertificateFailure,
  OverlappingBlocks,
  SchemaError,
  UnknownTailRule,
  Overflow,
};

std::string_view to_string(ErrorCode code);

/// Base class of every error raised by the library. The code is stable and is
/// what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for errors that signal a violated mathematical hypothesis of the input
/// (as opposed to malformed input or an internal failure).
[[nodiscard]] bool is_hypothesis_failure(ErrorCode code) noexcept;

}  // namespace gshift
