#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "pvc/big_real.hpp"

namespace pvc {

/// Element of Z[beta] in the power basis (1, beta, ..., beta^{r-1}).
struct ZBeta {
  std::vector<std::int64_t> c;

  bool is_zero() const {
    for (auto v : c)
      if (v != 0) return false;
    return true;
  }
  auto operator<=>(const ZBeta&) const = default;
};

/// Exact arithmetic in Z[beta] for an algebraic integer beta with
/// beta^r = a_1 beta^{r-1} + ... + a_r. Overflow of the 64-bit coordinates
/// raises ErrorCode::Overflow rather than wrapping.
class ZBetaRing {
 public:
  ZBetaRing(std::vector<std::int64_t> recurrence, const BigReal& beta);

  int degree() const { return static_cast<int>(rec_.size()); }

  ZBeta from_int(std::int64_t k) const;
  ZBeta beta_power(int k) const;

  ZBeta add(const ZBeta& a, const ZBeta& b) const;
  ZBeta sub(const ZBeta& a, const ZBeta& b) const;
  ZBeta scale(const ZBeta& a, std::int64_t k) const;
  ZBeta mul_beta(const ZBeta& a) const;
  ZBeta add_int(const ZBeta& a, std::int64_t k) const;

  long double value(const ZBeta& a) const;
  BigReal value_big(const ZBeta& a, mpfr_prec_t bits) const;

  /// Exact sign: zero is detected on coordinates, the rest by evaluation with
  /// an extended-precision fallback when cancellation is possible.
  int sign(const ZBeta& a) const;
  int compare(const ZBeta& a, const ZBeta& b) const { return sign(sub(a, b)); }

 private:
  std::vector<std::int64_t> rec_;
  std::vector<long double> powers_;  // beta^0 .. beta^{r-1}
  BigReal beta_big_;
};

}  // namespace pvc
