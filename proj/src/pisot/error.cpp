#include "pvc/error.hpp"

namespace pvc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPisot: return "NotPisot";
    case ErrorCode::NoRealRootAboveOne: return "NoRealRootAboveOne";
    case ErrorCode::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorCode::InadmissibleDigits: return "InadmissibleDigits";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingularFactor: return "SingularFactor";
    case ErrorCode::NonMonotoneSums: return "NonMonotoneSums";
    case ErrorCode::DegenerateSVD: return "DegenerateSVD";
    case ErrorCode::UnboundedD: return "UnboundedD";
    case ErrorCode::NegativeEntries: return "NegativeEntries";
    case ErrorCode::NoCertificate: return "NoCertificate";
    case ErrorCode::CertificateViolated: return "CertificateViolated";
    case ErrorCode::NotSimpleEigenvalue: return "NotSimpleEigenvalue";
    case ErrorCode::NonPositiveEigenvector: return "NonPositiveEigenvector";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::NoCommonPeriod: return "NoCommonPeriod";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UnknownSeries: return "UnknownSeries";
  }
  return "Unknown";
}

}  // namespace pvc
