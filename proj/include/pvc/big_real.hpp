#pragma once

#include <mpfr.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>

namespace pvc {

/// RAII handle over an MPFR float with an explicit bit precision.
///
/// Arithmetic results take the precision of the destination, so callers pick
/// the working precision once and keep it. Rounding is always to nearest.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits = 128) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  BigReal(double x, mpfr_prec_t bits) : BigReal(bits) { mpfr_set_d(v_, x, MPFR_RNDN); }

  BigReal(const BigReal& o) : BigReal(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigReal(BigReal&& o) noexcept : BigReal(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  /// Changes precision keeping the value (rounded).
  void round_to(mpfr_prec_t bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  std::string to_string(int digits = 30) const;

  BigReal& operator+=(const BigReal& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator-=(const BigReal& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator*=(const BigReal& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator/=(const BigReal& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& add_si(long k) {
    mpfr_add_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  BigReal& mul_si(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  BigReal& mul_d(double k) {
    mpfr_mul_d(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  BigReal& div_si(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }

  /// Fractional part in [0, 1), i.e. x - floor(x).
  BigReal frac_positive() const;
  /// Nearest-integer distance, in [0, 1/2].
  double distance_to_integer() const;

  int compare(const BigReal& o) const { return mpfr_cmp(v_, o.v_); }
  int sign() const { return mpfr_sgn(v_); }

  /// Uniform value in [lo, hi) with `precision()` random mantissa bits.
  static BigReal uniform(std::mt19937_64& rng, double lo, double hi, mpfr_prec_t bits);

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

inline BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
inline BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
inline BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }

}  // namespace pvc
