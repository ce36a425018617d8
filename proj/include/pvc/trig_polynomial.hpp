#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvc/orbit.hpp"

namespace pvc {

using cplx = std::complex<double>;

struct TrigTerm {
  double freq = 0;  // radians per unit x
  cplx coeff;
};

/// Finite sum  sum_n A_n exp(i Lambda_n x): the concrete representation of a
/// uniformly almost periodic function. Terms are kept sorted by frequency
/// with duplicates merged.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::vector<TrigTerm> terms);

  static TrigPolynomial constant(cplx c);
  static TrigPolynomial exponential(double freq, cplx coeff);
  /// a * cos(freq x)
  static TrigPolynomial cosine(double freq, double a = 1.0);
  /// a * sin(freq x)
  static TrigPolynomial sine(double freq, double a = 1.0);

  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx operator()(double x) const;
  /// Batched evaluation through the SIMD kernels.
  void evaluate(std::span<const double> xs, std::span<cplx> out) const;

  /// All frequencies in 2 pi Z.
  bool is_one_periodic(double tol = 1e-9) const;
  /// Conjugate-symmetric: for each (L, A) there is (-L, conj A).
  bool is_real_valued(double tol = 1e-12) const;
  /// Only the zero frequency (or no terms).
  bool is_constant() const;

  /// x -> f(x + c)
  TrigPolynomial shifted(double c) const;
  TrigPolynomial derivative() const;
  /// sum |A_n|: a uniform bound on |f|.
  double coefficient_l1() const;
  /// sum |Lambda_n A_n|: a uniform bound on |f'|.
  double derivative_bound() const;
  double max_frequency() const;

  /// Integer harmonic k_n with Lambda_n = 2 pi k_n / period; throws
  /// NoCommonPeriod when a frequency is not commensurate with the period.
  std::vector<std::int64_t> harmonics(const Period& period) const;

  /// "(freq, re, im) (freq, re, im) ..."; freq may be written as 2pi*k.
  std::string to_text() const;
  static TrigPolynomial parse(std::string_view text);

  friend TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b);
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);
  friend TrigPolynomial operator*(cplx s, const TrigPolynomial& a);

 private:
  std::vector<TrigTerm> terms_;
};

cplx evaluate(const TrigPolynomial& f, double x);

/// The zero-frequency coefficient: every oscillating term averages out.
cplx bohr_mean_exact(const TrigPolynomial& f);

/// Smallest natural common period of a family (1, 2 pi, or 2 pi / omega for
/// the smallest nonzero frequency omega); throws NoCommonPeriod otherwise.
Period common_period(std::span<const TrigPolynomial> family);

}  // namespace pvc
