#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, where the target supports it, an AVX2+FMA variant;
// the dispatching entry points pick one at runtime (override with the
// PVC_SIMD=scalar|avx2 environment variable).

namespace pvc::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

Backend active_backend();
void set_backend(Backend b);  // throws if unavailable
bool backend_available(Backend b);
std::string_view backend_name(Backend b);

/// out[i] = sum_t coeffs[t] * exp(i * freqs[t] * xs[i])
void eval_trig(std::span<const double> freqs, std::span<const cplx> coeffs, std::span<const double> xs,
               std::span<cplx> out);

/// out[i] = sum_t coeffs[t] * exp(2 pi i * harmonics[t] * u[i]); the product
/// harmonics[t] * u[i] is reduced mod 1 before the sine/cosine.
void eval_harmonics(std::span<const std::int64_t> harmonics, std::span<const cplx> coeffs,
                    std::span<const double> u, std::span<cplx> out);

/// max_i |a[i] - b[i]|
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

/// out[h-1] = sum_n exp(2 pi i h u[n]) for h = 1..out.size()
void weyl_sums(std::span<const double> u, std::span<cplx> out);

#define PVC_KERNEL_DECLS                                                                              \
  void eval_trig(std::span<const double> freqs, std::span<const cplx> coeffs,                         \
                 std::span<const double> xs, std::span<cplx> out);                                   \
  void eval_harmonics(std::span<const std::int64_t> harmonics, std::span<const cplx> coeffs,          \
                      std::span<const double> u, std::span<cplx> out);                               \
  double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);                              \
  void weyl_sums(std::span<const double> u, std::span<cplx> out);

namespace scalar {
PVC_KERNEL_DECLS
}
namespace avx2 {
PVC_KERNEL_DECLS
}

#undef PVC_KERNEL_DECLS

}  // namespace pvc::kernels
