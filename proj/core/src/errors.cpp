#include "gshift/errors.hpp"

namespace gshift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::LocalityViolation: return "LocalityViolation";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::NotFoundWithinHorizon: return "NotFoundWithinHorizon";
    case ErrorCode::ExceededBound: return "ExceededBound";
    case ErrorCode::InsufficientChain: return "InsufficientChain";
    case ErrorCode::SingularCoefficient: return "SingularCoefficient";
    case ErrorCode::NotNilpotentModulo: return "NotNilpotentModulo";
    case ErrorCode::NotInGeneralizedKernel: return "NotInGeneralizedKernel";
    case ErrorCode::ProviderExhausted: return "ProviderExhausted";
    case ErrorCode::CertificateFailure: return "CertificateFailure";
    case ErrorCode::OverlappingBlocks: return "OverlappingBlocks";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownTailRule: return "UnknownTailRule";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

bool is_hypothesis_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFoundWithinHorizon:
    case ErrorCode::NotInGeneralizedKernel:
    case ErrorCode::NotNilpotentModulo:
    case ErrorCode::HorizonTooShort:
    case ErrorCode::Unbounded:
      return true;
    default:
      return false;
  }
}

}  // namespace gshift
