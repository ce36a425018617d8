#include <algorithm>
#include <cmath>

#include "pvc/kernels.hpp"

namespace pvc::kernels::scalar {

void eval_trig(std::span<const double> freqs, std::span<const cplx> coeffs, std::span<const double> xs,
               std::span<cplx> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double re = 0, im = 0;
    for (std::size_t t = 0; t < freqs.size(); ++t) {
      const double a = freqs[t] * xs[i];
      const double c = std::cos(a), s = std::sin(a);
      re += coeffs[t].real() * c - coeffs[t].imag() * s;
      im += coeffs[t].real() * s + coeffs[t].imag() * c;
    }
    out[i] = {re, im};
  }
}

void eval_harmonics(std::span<const std::int64_t> harmonics, std::span<const cplx> coeffs,
                    std::span<const double> u, std::span<cplx> out) {
  constexpr double two_pi = 6.283185307179586476925;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double re = 0, im = 0;
    for (std::size_t t = 0; t < harmonics.size(); ++t) {
      const double ku = static_cast<double>(harmonics[t]) * u[i];
      const double a = two_pi * (ku - std::nearbyint(ku));
      const double c = std::cos(a), s = std::sin(a);
      re += coeffs[t].real() * c - coeffs[t].imag() * s;
      im += coeffs[t].real() * s + coeffs[t].imag() * c;
    }
    out[i] = {re, im};
  }
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dr = a[i].real() - b[i].real(), di = a[i].imag() - b[i].imag();
    m = std::max(m, std::sqrt(dr * dr + di * di));
  }
  return m;
}

void weyl_sums(std::span<const double> u, std::span<cplx> out) {
  constexpr double two_pi = 6.283185307179586476925;
  for (std::size_t h = 1; h <= out.size(); ++h) {
    double re = 0, im = 0;
    for (double v : u) {
      const double hu = static_cast<double>(h) * v;
      const double a = two_pi * (hu - std::nearbyint(hu));
      re += std::cos(a);
      im += std::sin(a);
    }
    out[h - 1] = {re, im};
  }
}

}  // namespace pvc::kernels::scalar
