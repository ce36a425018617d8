// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after a CPU feature check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "pvc/kernels.hpp"

namespace pvc::kernels::avx2 {
namespace {

// pi/2 split for Cody-Waite reduction; exact products for |q| < 2^20.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kReduceLimit = 1.0e6;

struct SinCos {
  __m256d s, c;
};

// sin/cos on 4 lanes; valid (and checked by the callers) for |x| <= kReduceLimit.
inline SinCos sincos4(__m256d x) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(0.63661977236758134308)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Lo), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
  const __m256d hz = _mm256_mul_pd(_mm256_set1_pd(0.5), z);
  const __m256d w = _mm256_sub_pd(_mm256_set1_pd(1.0), hz);
  // 1 - hz + (((1 - w) - hz) + z^2 pc), as in the fdlibm kernel
  const __m256d corr = _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), w), hz);
  const __m256d cos_r = _mm256_add_pd(w, _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc, corr));

  const __m256i qi = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(q));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, one), one));
  const __m256d sin_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(qi, two), 62));
  const __m256d cos_sign =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(qi, one), two), 62));

  SinCos out;
  out.s = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sin_sign);
  out.c = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), cos_sign);
  return out;
}

inline bool needs_fallback(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  return _mm256_movemask_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(kReduceLimit), _CMP_GT_OQ)) != 0;
}

inline void store_complex(cplx* dst, __m256d re, __m256d im) {
  // interleave (re0 im0 re1 im1 | re2 im2 re3 im3)
  const __m256d lo = _mm256_unpacklo_pd(re, im);  // re0 im0 re2 im2
  const __m256d hi = _mm256_unpackhi_pd(re, im);  // re1 im1 re3 im3
  double* d = reinterpret_cast<double*>(dst);
  _mm256_storeu_pd(d, _mm256_permute2f128_pd(lo, hi, 0x20));
  _mm256_storeu_pd(d + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void eval_trig(std::span<const double> freqs, std::span<const cplx> coeffs, std::span<const double> xs,
               std::span<cplx> out) {
  const std::size_t n = xs.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    bool fallback = false;
    for (std::size_t t = 0; t < freqs.size() && !fallback; ++t) {
      const __m256d a = _mm256_mul_pd(_mm256_set1_pd(freqs[t]), x);
      if (needs_fallback(a)) {
        fallback = true;
        break;
      }
      const SinCos sc = sincos4(a);
      const __m256d ar = _mm256_set1_pd(coeffs[t].real()), ai = _mm256_set1_pd(coeffs[t].imag());
      re = _mm256_fmadd_pd(ar, sc.c, _mm256_fnmadd_pd(ai, sc.s, re));
      im = _mm256_fmadd_pd(ar, sc.s, _mm256_fmadd_pd(ai, sc.c, im));
    }
    if (fallback)
      scalar::eval_trig(freqs, coeffs, xs.subspan(i, 4), out.subspan(i, 4));
    else
      store_complex(out.data() + i, re, im);
  }
  if (i < n) scalar::eval_trig(freqs, coeffs, xs.subspan(i), out.subspan(i));
}

void eval_harmonics(std::span<const std::int64_t> harmonics, std::span<const cplx> coeffs,
                    std::span<const double> u, std::span<cplx> out) {
  const std::size_t n = u.size();
  const __m256d two_pi = _mm256_set1_pd(6.283185307179586476925);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u.data() + i);
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    for (std::size_t t = 0; t < harmonics.size(); ++t) {
      const __m256d ku = _mm256_mul_pd(_mm256_set1_pd(static_cast<double>(harmonics[t])), x);
      const __m256d red =
          _mm256_sub_pd(ku, _mm256_round_pd(ku, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
      const SinCos sc = sincos4(_mm256_mul_pd(two_pi, red));
      const __m256d ar = _mm256_set1_pd(coeffs[t].real()), ai = _mm256_set1_pd(coeffs[t].imag());
      re = _mm256_fmadd_pd(ar, sc.c, _mm256_fnmadd_pd(ai, sc.s, re));
      im = _mm256_fmadd_pd(ar, sc.s, _mm256_fmadd_pd(ai, sc.c, im));
    }
    store_complex(out.data() + i, re, im);
  }
  if (i < n) scalar::eval_harmonics(harmonics, coeffs, u.subspan(i), out.subspan(i));
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const double* pa = reinterpret_cast<const double*>(a.data());
  const double* pb = reinterpret_cast<const double*>(b.data());
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    const __m256d sq = _mm256_mul_pd(d, d);
    // (re0^2+im0^2, same, re1^2+im1^2, same)
    const __m256d pair = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
    m = _mm256_max_pd(m, pair);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double best = std::sqrt(std::max({lanes[0], lanes[1], lanes[2], lanes[3]}));
  if (i < n) best = std::max(best, scalar::max_abs_diff(a.subspan(i), b.subspan(i)));
  return best;
}

void weyl_sums(std::span<const double> u, std::span<cplx> out) {
  const std::size_t n = u.size();
  const __m256d two_pi = _mm256_set1_pd(6.283185307179586476925);
  for (std::size_t h = 1; h <= out.size(); ++h) {
    const __m256d hv = _mm256_set1_pd(static_cast<double>(h));
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d hu = _mm256_mul_pd(hv, _mm256_loadu_pd(u.data() + i));
      const __m256d red =
          _mm256_sub_pd(hu, _mm256_round_pd(hu, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
      const SinCos sc = sincos4(_mm256_mul_pd(two_pi, red));
      re = _mm256_add_pd(re, sc.c);
      im = _mm256_add_pd(im, sc.s);
    }
    double tre = 0, tim = 0;
    for (; i < n; ++i) {
      const double hu = static_cast<double>(h) * u[i];
      const double a = 6.283185307179586476925 * (hu - std::nearbyint(hu));
      tre += std::cos(a);
      tim += std::sin(a);
    }
    out[h - 1] = {hsum(re) + tre, hsum(im) + tim};
  }
}

}  // namespace pvc::kernels::avx2
