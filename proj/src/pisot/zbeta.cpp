#include "pvc/zbeta.hpp"

#include <cmath>
#include <limits>

#include "pvc/error.hpp"

namespace pvc {
namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "Z[beta] coordinate overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "Z[beta] coordinate overflow");
  return r;
}

}  // namespace

ZBetaRing::ZBetaRing(std::vector<std::int64_t> recurrence, const BigReal& beta)
    : rec_(std::move(recurrence)), beta_big_(beta) {
  powers_.resize(rec_.size());
  const long double b = beta.to_long_double();
  long double p = 1.0L;
  for (auto& v : powers_) {
    v = p;
    p *= b;
  }
}

ZBeta ZBetaRing::from_int(std::int64_t k) const {
  ZBeta z{std::vector<std::int64_t>(rec_.size(), 0)};
  z.c[0] = k;
  return z;
}

ZBeta ZBetaRing::beta_power(int k) const {
  ZBeta z = from_int(1);
  for (int i = 0; i < k; ++i) z = mul_beta(z);
  return z;
}

ZBeta ZBetaRing::add(const ZBeta& a, const ZBeta& b) const {
  ZBeta z = a;
  for (std::size_t i = 0; i < z.c.size(); ++i) z.c[i] = checked_add(z.c[i], b.c[i]);
  return z;
}

ZBeta ZBetaRing::sub(const ZBeta& a, const ZBeta& b) const {
  ZBeta z = a;
  for (std::size_t i = 0; i < z.c.size(); ++i) z.c[i] = checked_add(z.c[i], -b.c[i]);
  return z;
}

ZBeta ZBetaRing::scale(const ZBeta& a, std::int64_t k) const {
  ZBeta z = a;
  for (auto& v : z.c) v = checked_mul(v, k);
  return z;
}

ZBeta ZBetaRing::add_int(const ZBeta& a, std::int64_t k) const {
  ZBeta z = a;
  z.c[0] = checked_add(z.c[0], k);
  return z;
}

// beta * (c_0 + c_1 beta + ... + c_{r-1} beta^{r-1}); the top coordinate wraps
// through beta^r = a_1 beta^{r-1} + ... + a_r.
ZBeta ZBetaRing::mul_beta(const ZBeta& a) const {
  const std::size_t r = rec_.size();
  ZBeta z{std::vector<std::int64_t>(r, 0)};
  const std::int64_t top = a.c[r - 1];
  for (std::size_t i = r - 1; i > 0; --i) z.c[i] = a.c[i - 1];
  for (std::size_t i = 0; i < r; ++i) {
    // beta^r contributes a_{j} to beta^{r-j}
    const std::size_t power = r - 1 - i;
    z.c[power] = checked_add(z.c[power], checked_mul(top, rec_[i]));
  }
  return z;
}

long double ZBetaRing::value(const ZBeta& a) const {
  long double s = 0.0L;
  for (std::size_t i = a.c.size(); i-- > 0;) s += static_cast<long double>(a.c[i]) * powers_[i];
  return s;
}

BigReal ZBetaRing::value_big(const ZBeta& a, mpfr_prec_t bits) const {
  BigReal b = beta_big_;
  b.round_to(bits);
  BigReal s(0.0, bits);
  for (std::size_t i = a.c.size(); i-- > 0;) {
    s *= b;
    mpfr_add_si(s.raw(), s.raw(), static_cast<long>(a.c[i]), MPFR_RNDN);
  }
  return s;
}

int ZBetaRing::sign(const ZBeta& a) const {
  if (a.is_zero()) return 0;
  const long double v = value(a);
  long double magnitude = 0.0L;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    magnitude += std::fabs(static_cast<long double>(a.c[i])) * powers_[i];
  if (std::fabs(v) > 64.0L * std::numeric_limits<long double>::epsilon() * magnitude)
    return v > 0 ? 1 : -1;
  const BigReal big = value_big(a, beta_big_.precision());
  return big.sign();
}

}  // namespace pvc
