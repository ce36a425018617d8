#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pvc/kernels.hpp"

using namespace pvc::kernels;

namespace {

struct Case {
  std::vector<double> freqs;
  std::vector<cplx> coeffs;
  std::vector<double> xs;
};

Case random_case(std::uint64_t seed, std::size_t terms, std::size_t n, double xspan) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Case c;
  for (std::size_t t = 0; t < terms; ++t) {
    c.freqs.push_back(50.0 * U(rng));
    c.coeffs.emplace_back(U(rng), U(rng));
  }
  for (std::size_t i = 0; i < n; ++i) c.xs.push_back(xspan * U(rng));
  return c;
}

double l1(const std::vector<cplx>& v) {
  double s = 0;
  for (const auto& z : v) s += std::abs(z);
  return s;
}

#define REQUIRE_AVX2() \
  if (!backend_available(Backend::Avx2)) GTEST_SKIP() << "no AVX2 on this host"

}  // namespace

TEST(Kernels, ScalarMatchesDirectSum) {
  const auto c = random_case(1, 5, 33, 10.0);
  std::vector<cplx> out(c.xs.size());
  scalar::eval_trig(c.freqs, c.coeffs, c.xs, out);
  for (std::size_t i = 0; i < c.xs.size(); ++i) {
    cplx s = 0;
    for (std::size_t t = 0; t < c.freqs.size(); ++t) s += c.coeffs[t] * std::exp(cplx(0, c.freqs[t] * c.xs[i]));
    EXPECT_NEAR(std::abs(s - out[i]), 0.0, 1e-13);
  }
}

TEST(Kernels, EvalTrigEquivalence) {
  REQUIRE_AVX2();
  for (double span : {1.0, 100.0, 1e4, 1e5}) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
      const auto c = random_case(n + 7, 6, n, span);
      std::vector<cplx> a(n), b(n);
      scalar::eval_trig(c.freqs, c.coeffs, c.xs, a);
      avx2::eval_trig(c.freqs, c.coeffs, c.xs, b);
      const double scale = std::max(1.0, l1(c.coeffs)) * std::max(1.0, span * 50.0);
      EXPECT_LE(scalar::max_abs_diff(a, b), 1e-15 * scale) << "span " << span << " n " << n;
    }
  }
}

TEST(Kernels, EvalTrigFallbackForHugeArguments) {
  REQUIRE_AVX2();
  const std::vector<double> freqs{1.0};
  const std::vector<cplx> coeffs{cplx(1, 0)};
  const std::vector<double> xs{1e9, 2e9, -3e9, 4e9, 1.0};
  std::vector<cplx> a(xs.size()), b(xs.size());
  scalar::eval_trig(freqs, coeffs, xs, a);
  avx2::eval_trig(freqs, coeffs, xs, b);
  EXPECT_EQ(scalar::max_abs_diff(a, b), 0.0);
}

TEST(Kernels, HarmonicsEquivalence) {
  REQUIRE_AVX2();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::vector<std::int64_t> h{0, 1, -1, 7, -40, 123456};
  std::vector<cplx> coeffs;
  for (std::size_t t = 0; t < h.size(); ++t) coeffs.emplace_back(U(rng) - 0.5, U(rng) - 0.5);
  std::vector<double> u(1003);
  for (auto& v : u) v = U(rng);
  std::vector<cplx> a(u.size()), b(u.size());
  scalar::eval_harmonics(h, coeffs, u, a);
  avx2::eval_harmonics(h, coeffs, u, b);
  EXPECT_LE(scalar::max_abs_diff(a, b), 1e-14 * l1(coeffs));
}

TEST(Kernels, MaxAbsDiffEquivalence) {
  REQUIRE_AVX2();
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  for (std::size_t n : {0u, 1u, 2u, 3u, 1001u}) {
    std::vector<cplx> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = {N(rng), N(rng)};
      b[i] = {N(rng), N(rng)};
    }
    EXPECT_NEAR(scalar::max_abs_diff(a, b), avx2::max_abs_diff(a, b), 1e-15);
  }
}

TEST(Kernels, WeylSumsEquivalence) {
  REQUIRE_AVX2();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> u(10007);
  for (auto& v : u) v = U(rng);
  std::vector<cplx> a(20), b(20);
  scalar::weyl_sums(u, a);
  avx2::weyl_sums(u, b);
  EXPECT_LE(scalar::max_abs_diff(a, b), 1e-14 * static_cast<double>(u.size()));
}

TEST(Kernels, DispatchSwitching) {
  const Backend before = active_backend();
  set_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  EXPECT_EQ(backend_name(Backend::Scalar), "scalar");
  const std::vector<double> u{0.0, 0.25};
  std::vector<cplx> s(1);
  weyl_sums(u, s);
  EXPECT_NEAR(s[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(s[0].imag(), 1.0, 1e-15);
  if (backend_available(Backend::Avx2)) set_backend(Backend::Avx2);
  set_backend(before);
}
