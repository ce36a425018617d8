#include <atomic>
#include <cstdlib>
#include <string>

#include "pvc/error.hpp"
#include "pvc/kernels.hpp"

namespace pvc::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PVC_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("PVC_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool backend_available(Backend b) { return b == Backend::Scalar || cpu_has_avx2(); }

void set_backend(Backend b) {
  require(backend_available(b), ErrorCode::InvalidArgument,
          std::string("SIMD backend unavailable: ") + std::string(backend_name(b)));
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

#if defined(PVC_HAVE_AVX2)
#define PVC_DISPATCH(fn, ...) \
  (active_backend() == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PVC_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void eval_trig(std::span<const double> freqs, std::span<const cplx> coeffs, std::span<const double> xs,
               std::span<cplx> out) {
  PVC_DISPATCH(eval_trig, freqs, coeffs, xs, out);
}

void eval_harmonics(std::span<const std::int64_t> harmonics, std::span<const cplx> coeffs,
                    std::span<const double> u, std::span<cplx> out) {
  PVC_DISPATCH(eval_harmonics, harmonics, coeffs, u, out);
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  return PVC_DISPATCH(max_abs_diff, a, b);
}

void weyl_sums(std::span<const double> u, std::span<cplx> out) { PVC_DISPATCH(weyl_sums, u, out); }

}  // namespace pvc::kernels
