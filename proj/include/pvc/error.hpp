#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvc {

enum class ErrorCode {
  InvalidArgument,
  NotPisot,
  NoRealRootAboveOne,
  ReduciblePolynomial,
  InadmissibleDigits,
  Overflow,
  NonFinite,
  SingularFactor,
  NonMonotoneSums,
  DegenerateSVD,
  UnboundedD,
  NegativeEntries,
  NoCertificate,
  CertificateViolated,
  NotSimpleEigenvalue,
  NonPositiveEigenvector,
  ZeroVector,
  QuadratureFailure,
  NotPrimitive,
  NoCommonPeriod,
  ConfigInvalid,
  UnknownSeries,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace pvc
