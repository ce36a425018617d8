#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pvc/certificate.hpp"
#include "pvc/error.hpp"
#include "pvc/lyapunov.hpp"
#include "pvc/oseledec.hpp"
#include "pvc/product.hpp"

using namespace pvc;

namespace {

constexpr double kPi = std::numbers::pi;

ScalingBase two() { return make_pisot({1, -2}); }
ScalingBase golden() { return make_pisot({1, -1, -1}); }

BetaAdaptedMatrix scalar_two_plus_cos(ScalingBase b = two()) {
  return BetaAdaptedMatrix(1, {{TrigPolynomial::constant(2.0) + TrigPolynomial::cosine(2 * kPi), 0}}, std::move(b));
}

// Fourier-transform matrix of a Bernoulli convolution after x -> beta x, so
// that all scale exponents are >= 0.
BetaAdaptedMatrix bernoulli(double p, ScalingBase b = golden()) {
  std::vector<MatrixEntry> e = {
      {TrigPolynomial::exponential(2 * kPi, p), 1},
      {TrigPolynomial::exponential(2 * kPi, 1 - p), 0},
      {TrigPolynomial::constant(1.0), 0},
      {TrigPolynomial::constant(0.0), 0},
  };
  return BetaAdaptedMatrix(2, std::move(e), std::move(b));
}

// exponents near log 3 and log 0.5
BetaAdaptedMatrix separated() {
  std::vector<MatrixEntry> e = {
      {TrigPolynomial::constant(3.0) + TrigPolynomial::cosine(2 * kPi), 0},
      {TrigPolynomial::constant(1.0), 0},
      {TrigPolynomial::sine(2 * kPi, 0.5), 1},
      {TrigPolynomial::constant(0.5), 0},
  };
  return BetaAdaptedMatrix(2, std::move(e), golden());
}

CMatrix diag(std::initializer_list<double> v) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

CMatrix random_matrix(std::mt19937_64& rng, int d, bool complex_entries = true) {
  std::uniform_real_distribution<double> u(-1, 1);
  CMatrix m(d, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(u(rng), complex_entries ? u(rng) : 0.0);
  return m;
}

double rel_diff(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

}  // namespace

TEST(Product, IdentityAndDiagonal) {
  const auto I = BetaAdaptedMatrix::constant(CMatrix::Identity(3, 3), two());
  const auto p = product(I, 0.3, 17);
  EXPECT_NEAR(p.log_norm, 0.0, 1e-13);
  EXPECT_LT((p.unit_matrix - CMatrix::Identity(3, 3)).norm(), 1e-14);
  const auto D = BetaAdaptedMatrix::constant(diag({2, 0.5}), two());
  EXPECT_NEAR(product(D, 0.0, 10).log_norm, 10 * std::log(2.0), 1e-12);
  const auto z = product(D, 0.0, 0);
  EXPECT_EQ(z.log_norm, 0.0);
  EXPECT_EQ(z.n, 0u);
}

TEST(Product, ScalarSumOracle) {
  const auto M = scalar_two_plus_cos();
  double expect = 0;
  for (int k = 0; k < 5; ++k) expect += std::log(2 + std::cos(2 * kPi * std::ldexp(0.1, k)));
  EXPECT_NEAR(product(M, 0.1, 5).log_norm, expect, 1e-12);
  const auto f = subadditive_sequence(M, 1, 0.1, 5);
  EXPECT_NEAR(f.back(), expect, 1e-12);
}

TEST(Product, UnitMatrixHasNormOne) {
  std::mt19937_64 rng(11);
  std::vector<CMatrix> fs;
  for (int k = 0; k < 50; ++k) fs.push_back(random_matrix(rng, 3));
  const auto p = product_of(fs);
  EXPECT_NEAR(operator_norm(p.unit_matrix), 1.0, 1e-12);
}

TEST(Product, RenormalizationMatchesNaiveProduct) {
  std::mt19937_64 rng(7);
  for (int n : {1, 5, 50, 200}) {
    std::vector<CMatrix> fs;
    CMatrix naive = CMatrix::Identity(3, 3);
    for (int k = 0; k < n; ++k) {
      fs.push_back(random_matrix(rng, 3));
      naive = fs.back() * naive;
    }
    EXPECT_LT(rel_diff(product_of(fs).value(), naive), n * 1e-12) << "n = " << n;
  }
}

TEST(Product, ErrorsOnSingularAndNonFinite) {
  std::vector<CMatrix> zero = {CMatrix::Zero(2, 2)};
  EXPECT_THROW(product_of(zero), Error);
  std::vector<CMatrix> bad = {CMatrix::Constant(2, 2, cplx(INFINITY, 0))};
  try {
    product_of(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Exterior, TrivialOrders) {
  std::mt19937_64 rng(3);
  const auto A = random_matrix(rng, 4);
  EXPECT_EQ(exterior_power(A, 1), A);
  EXPECT_NEAR(std::abs(exterior_power(A, 4)(0, 0) - A.determinant()), 0.0, 1e-13);
  EXPECT_THROW(exterior_power(A, 0), Error);
  EXPECT_THROW(exterior_power(A, 5), Error);
}

TEST(Exterior, MinorsOfIntegerMatrix) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(-3, 3);
  CMatrix A(3, 3);
  for (Eigen::Index i = 0; i < 9; ++i) A.data()[i] = u(rng);
  const auto W = exterior_power(A, 2);
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int i0 = pairs[r][0], i1 = pairs[r][1], j0 = pairs[c][0], j1 = pairs[c][1];
      const cplx m = A(i0, j0) * A(i1, j1) - A(i0, j1) * A(i1, j0);
      EXPECT_EQ(W(r, c), m) << r << "," << c;
    }
}

TEST(Exterior, CombinationsLexicographic) {
  const auto c = combinations(4, 2);
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(c[2], (std::vector<int>{0, 3}));
  EXPECT_EQ(c[5], (std::vector<int>{2, 3}));
}

TEST(Exterior, Functoriality) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto A = random_matrix(rng, 4), B = random_matrix(rng, 4);
    for (int q = 1; q <= 4; ++q)
      EXPECT_LT(rel_diff(exterior_power(A * B, q), exterior_power(A, q) * exterior_power(B, q)), 1e-10);
  }
}

TEST(Subadditive, TopOrderIsDeterminantSum) {
  const auto M = bernoulli(0.2);
  const BigReal x(1.37, 64);
  const auto f = subadditive_sequence(M, 2, x, 30);
  const auto fs = M.along_orbit(x, 30);
  double s = 0;
  for (int k = 0; k < 30; ++k) {
    s += std::log(std::abs(fs[static_cast<std::size_t>(k)].determinant()));
    EXPECT_NEAR(f[static_cast<std::size_t>(k)], s, 1e-9);
  }
}

TEST(Subadditive, SpotCheck) {
  const auto M = bernoulli(0.3);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> un(1, 40);
  std::uniform_real_distribution<double> ux(0, 5);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(un(rng)), m = static_cast<std::size_t>(un(rng));
    const auto fs = M.along_orbit(ux(rng), n + m);
    const std::span<const CMatrix> all(fs);
    for (int q = 1; q <= 2; ++q) {
      const double fnm = subadditive_sequence(all, q).back();
      const double fn = subadditive_sequence(all.first(n), q).back();
      const double fm = subadditive_sequence(all.subspan(n), q).back();
      EXPECT_LE(fnm, fn + fm + 1e-9);
    }
  }
}

TEST(Subadditive, CocycleIdentityOfExteriorProducts) {
  std::mt19937_64 rng(23);
  std::vector<CMatrix> fs;
  for (int k = 0; k < 40; ++k) fs.push_back(random_matrix(rng, 4));
  for (int q = 1; q <= 3; ++q) {
    std::vector<CMatrix> wq;
    for (const auto& f : fs) wq.push_back(exterior_power(f, q));
    const auto whole = product_of(wq).value();
    const auto lower = product_of(std::span<const CMatrix>(wq).first(15)).value();
    const auto upper = product_of(std::span<const CMatrix>(wq).subspan(15)).value();
    EXPECT_LT(rel_diff(upper * lower, whole), 40 * 1e-10);
  }
}

TEST(Lyapunov, IdentityIsZero) {
  EstimationSpec spec;
  spec.ladder = default_ladder(6);
  const auto r = lyapunov_top(BetaAdaptedMatrix::constant(CMatrix::Identity(2, 2), two()), 1, spec);
  EXPECT_NEAR(r.estimate, 0.0, 1e-14);
  EXPECT_EQ(r.samples_used, 1u);
}

TEST(Lyapunov, UpperTriangularSpectralRadius) {
  CMatrix A(2, 2);
  A << 2, 1, 0, 3;
  EstimationSpec spec;
  spec.ladder = default_ladder(6);
  const auto r = lyapunov_top(BetaAdaptedMatrix::constant(A, two()), 1, spec);
  // (1/n) log |A^n| = log 3 + O(1/n); the doubling extrapolation removes the 1/n term
  EXPECT_NEAR(r.extrapolated, std::log(3.0), 1e-3);
  EXPECT_GT(r.estimate, std::log(3.0));
  EXPECT_LT(r.estimate, std::log(3.0) + 0.01);
}

TEST(Lyapunov, ScalarPeriodicIntegral) {
  EstimationSpec spec;
  spec.ladder = default_ladder(8);
  spec.samples = 2000;
  spec.seed = 42;
  const auto r = lyapunov_top(scalar_two_plus_cos(), 1, spec);
  EXPECT_NEAR(r.estimate, std::log((2 + std::sqrt(3.0)) / 2), 5e-3);
  ASSERT_EQ(r.per_n.size(), 8u);
  for (std::size_t l = 0; l < r.per_n.size(); ++l) {
    EXPECT_LE(r.estimate, r.per_n[l]);
    EXPECT_GE(r.dispersion[l], 0.0);
  }
  EXPECT_LT(r.dispersion.back(), r.dispersion.front());
}

TEST(Lyapunov, DeterministicAcrossThreadCounts) {
  EstimationSpec spec;
  spec.ladder = default_ladder(5);
  spec.samples = 64;
  spec.threads = 1;
  const auto a = lyapunov_top(bernoulli(0.2), 1, spec);
  spec.threads = 4;
  const auto b = lyapunov_top(bernoulli(0.2), 1, spec);
  EXPECT_EQ(a.per_n, b.per_n);
}

TEST(Lyapunov, DiagnosticsCsv) {
  EstimationSpec spec;
  spec.ladder = {2, 4};
  spec.samples = 8;
  spec.diagnostic_samples = 2;
  const auto r = lyapunov_top(scalar_two_plus_cos(), 1, spec);
  ASSERT_EQ(r.rows.size(), 4u);
  std::ostringstream os;
  write_diagnostics_csv(os, r.rows);
  EXPECT_EQ(os.str().rfind("n,q,x,f_n,running\n", 0), 0u);
  EXPECT_THROW(default_ladder(0), Error);
}

TEST(Spectrum, DiagonalThreeThird) {
  EstimationSpec spec;
  spec.ladder = default_ladder(6);
  const auto s = lyapunov_spectrum(BetaAdaptedMatrix::constant(diag({3, 1.0 / 3}), two()), spec);
  ASSERT_EQ(s.exponents.size(), 2u);
  EXPECT_NEAR(s.exponents[0], -std::log(3.0), 1e-6);
  EXPECT_NEAR(s.exponents[1], std::log(3.0), 1e-6);
  EXPECT_EQ(s.multiplicities, (std::vector<int>{1, 1}));
}

TEST(Spectrum, ClustersRepeatedExponent) {
  EstimationSpec spec;
  spec.ladder = default_ladder(6);
  spec.cluster_tol = 1e-3;
  const auto s = lyapunov_spectrum(BetaAdaptedMatrix::constant(diag({2, 2, 0.25}), two()), spec);
  ASSERT_EQ(s.exponents.size(), 2u);
  EXPECT_NEAR(s.exponents[0], -std::log(4.0), 1e-9);
  EXPECT_NEAR(s.exponents[1], std::log(2.0), 1e-9);
  EXPECT_EQ(s.multiplicities, (std::vector<int>{1, 2}));
}

TEST(Spectrum, ScalarAndSumConsistency) {
  EstimationSpec spec;
  spec.ladder = default_ladder(6);
  spec.samples = 200;
  const auto s1 = lyapunov_spectrum(scalar_two_plus_cos(), spec);
  const auto top = lyapunov_top(scalar_two_plus_cos(), 1, spec);
  ASSERT_EQ(s1.exponents.size(), 1u);
  EXPECT_DOUBLE_EQ(s1.exponents[0], top.estimate);

  const auto s = lyapunov_spectrum(bernoulli(0.2), spec);
  double sum = 0;
  for (std::size_t r = 0; r < s.exponents.size(); ++r) sum += s.multiplicities[r] * s.exponents[r];
  EXPECT_NEAR(sum, s.sums.back(), s.cluster_tol * 2);
}

TEST(Spectrum, ClusterHelper) {
  const double v[] = {0.5, -1.0, 0.5004, -0.9995};
  const auto c = cluster_exponents(v, 1e-3);
  ASSERT_EQ(c.exponents.size(), 2u);
  EXPECT_NEAR(c.exponents[0], -0.99975, 1e-12);
  EXPECT_EQ(c.multiplicities, (std::vector<int>{2, 2}));
}

TEST(Oseledec, DiagonalAxes) {
  const auto M = BetaAdaptedMatrix::constant(diag({3, 1.0 / 3}), two());
  const auto s = oseledec_at(M, 0.0, 50);
  ASSERT_EQ(s.exponents.size(), 2u);
  EXPECT_NEAR(s.exponents[0], -std::log(3.0), 1e-12);
  EXPECT_NEAR(s.exponents[1], std::log(3.0), 1e-12);
  ASSERT_EQ(s.filtration.size(), 2u);
  ASSERT_EQ(s.filtration[0].cols(), 1);
  const CMatrix e2 = CMatrix::Identity(2, 2).col(1);
  EXPECT_LT(principal_angle(s.filtration[0], e2), 1e-6);
  EXPECT_EQ(s.filtration[1].cols(), 2);
}

TEST(Oseledec, NestedFiltrationThreeByThree) {
  CMatrix A(3, 3);
  A << 4, 1, 0.5, 0, 1, 2, 0, 0, 0.25;
  const auto M = BetaAdaptedMatrix::constant(A, two());
  const auto s = oseledec_at(M, 0.0, 40);
  ASSERT_EQ(s.exponents.size(), 3u);
  EXPECT_NEAR(s.exponents[0], std::log(0.25), 0.1);
  EXPECT_NEAR(s.exponents[2], std::log(4.0), 0.1);
  for (std::size_t r = 0; r + 1 < s.filtration.size(); ++r)
    EXPECT_LT(principal_angle(s.filtration[r], s.filtration[r + 1]), 1e-10);
  // the slowest direction of an upper-triangular power is close to the last eigenvector
  Eigen::ComplexEigenSolver<CMatrix> es(A);
  for (Eigen::Index i = 0; i < 3; ++i) {
    if (std::abs(es.eigenvalues()(i) - cplx(0.25)) < 1e-12) {
      EXPECT_LT(principal_angle(es.eigenvectors().col(i).normalized(), s.filtration[0]), 1e-6);
    }
  }
  double sum = 0;
  for (std::size_t r = 0; r < 3; ++r) sum += s.exponents[r];
  EXPECT_NEAR(sum, s.log_det_rate, 1e-12);
}

TEST(Oseledec, EquivarianceAndGrowth) {
  const auto M = separated();
  const std::size_t n = 40;
  const BigReal x(1.2345, 64);
  const auto sx = oseledec_at(M, x, n);
  const auto sbx = oseledec_at(M, times_beta(M.base(), x), n);
  ASSERT_EQ(sx.exponents.size(), 2u);
  ASSERT_EQ(sbx.exponents.size(), 2u);
  for (std::size_t r = 0; r < sx.filtration.size(); ++r) {
    const CMatrix mapped = orthonormalize(M.along_orbit(x, 1)[0] * sx.filtration[r]);
    EXPECT_LT(principal_angle(mapped, sbx.filtration[r]), 10.0 / static_cast<double>(n));
  }
  for (std::size_t r = 0; r < 2; ++r) {
    const CVector v = sx.filtration[r].col(sx.filtration[r].cols() - 1);
    const double rate = filtered_growth_rate(M, sx, x, r, v);
    EXPECT_NEAR(rate, sx.exponents[r], 20.0 / static_cast<double>(n));
    EXPECT_EQ(growth_class(sx, rate), static_cast<int>(r));
  }
  // plain propagation of a generic vector picks the top class
  CVector g(2);
  g << 0.3, 0.7;
  EXPECT_EQ(growth_class(sx, growth_rate(M, x, n, g)), 1);
}

TEST(Oseledec, RandomVectorClassInvariant) {
  const auto M = separated();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  int same = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const BigReal x(1 + (t + 0.5) / trials, 64);
    const BigReal bx = times_beta(M.base(), x);
    CVector v(2);
    v << cplx(u(rng), u(rng)), cplx(u(rng), u(rng));
    const auto sx = oseledec_at(M, x, 200);
    const auto sbx = oseledec_at(M, bx, 200);
    same += growth_class(sx, growth_rate(M, x, 200, v)) == growth_class(sbx, growth_rate(M, bx, 200, v));
  }
  EXPECT_GE(same, static_cast<int>(0.95 * trials));
}

TEST(Distortion, EqualSequences) {
  const auto M = bernoulli(0.2);
  const std::vector<double> xs = {0.1, 0.7, 1.3};
  CVector v(2);
  v << 1, 2;
  const auto r = distortion_bound(M, xs, xs, v);
  EXPECT_GE(r.bound, 1.0);
  EXPECT_NEAR(r.actual_ratio, 1.0, 1e-15);
}

TEST(Distortion, ScalarRandomPairs) {
  const auto M = scalar_two_plus_cos();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(0, 10), ud(-1e-3, 1e-3);
  CVector v(1);
  v << 1;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> xs(20), ys(20);
    for (std::size_t k = 0; k < 20; ++k) {
      xs[k] = ux(rng);
      ys[k] = xs[k] + ud(rng);
    }
    const auto r = distortion_bound(M, xs, ys, v, {.grid_points = 256});
    ASSERT_LE(r.actual_ratio, r.bound * (1 + 1e-9));
  }
}

TEST(Distortion, PositivePath) {
  std::vector<MatrixEntry> e = {
      {TrigPolynomial::constant(1.0) + TrigPolynomial::cosine(2 * kPi, 0.5), 0},
      {TrigPolynomial::constant(0.75) + TrigPolynomial::sine(2 * kPi, 0.25), 1},
      {TrigPolynomial::constant(0.8) + TrigPolynomial::cosine(2 * kPi, 0.3), 0},
      {TrigPolynomial::constant(1.0), 0},
  };
  MatrixOptions o;
  o.positivity_delta = 0.5;
  const BetaAdaptedMatrix M(2, std::move(e), golden(), o);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(0, 1);
  const double rho = 0.5;
  std::vector<double> xs(30), ys(30);
  for (std::size_t k = 0; k < 30; ++k) {
    xs[k] = ux(rng);
    ys[k] = xs[k] + std::pow(rho, static_cast<double>(k)) / (2 * kPi);
  }
  CVector v(2);
  v << 1, 3;
  const auto r = distortion_bound(M, xs, ys, v, {.positive_path = true});
  EXPECT_TRUE(std::isfinite(r.bound));
  EXPECT_NEAR(r.bound, std::exp(r.theta_sum / r.delta), 1e-9 * r.bound);
  EXPECT_LE(r.actual_ratio, r.bound * (1 + 1e-9));
  CVector neg(2);
  neg << 1, -1;
  try {
    distortion_bound(M, xs, ys, neg, {.positive_path = true});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NegativeEntries);
  }
}

TEST(Distortion, UnboundedCondition) {
  CMatrix A = diag({1e4, 1e-4});
  const auto M = BetaAdaptedMatrix::constant(A, two());
  const std::vector<double> xs = {0.0};
  CVector v(2);
  v << 1, 0;
  try {
    distortion_bound(M, xs, xs, v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundedD);
  }
}

TEST(Certificate, BernoulliContraction) {
  const auto M = bernoulli(0.2);
  const auto c = joint_period_certificate(M, 1);
  EXPECT_EQ(c.kind, CertificateKind::Contraction);
  ASSERT_TRUE(c.D.has_value());
  EXPECT_NEAR(*c.D, 1.5, 0.02);
  EXPECT_GE(*c.D, 1.5);
  EXPECT_LT(*c.D * c.rho_alpha, 1.0);
  EXPECT_NEAR(c.rho_alpha, (std::sqrt(5.0) - 1) / 2, 1e-12);
  EXPECT_GT(c.script_C, 0.0);
}

TEST(Certificate, BernoulliHalfFails) {
  try {
    joint_period_certificate(bernoulli(0.5), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCertificate);
  }
}

TEST(Certificate, PositiveMatrix) {
  std::vector<MatrixEntry> e = {
      {TrigPolynomial::constant(0.4) + TrigPolynomial::cosine(2 * kPi, 0.1), 0},
      {TrigPolynomial::constant(1.0), 0},
      {TrigPolynomial::constant(1.0), 0},
      {TrigPolynomial::constant(0.4) + TrigPolynomial::sine(2 * kPi, 0.1), 1},
  };
  MatrixOptions o;
  o.positivity_delta = 0.3;
  const BetaAdaptedMatrix M(2, std::move(e), golden(), o);
  const auto c = joint_period_certificate(M, 1);
  EXPECT_EQ(c.kind, CertificateKind::Positivity);
  ASSERT_TRUE(c.delta.has_value());
  EXPECT_DOUBLE_EQ(*c.delta, 0.3);
  EXPECT_GE(*c.D * c.rho_alpha, 1.0);
}

TEST(Certificate, RejectsPlainRealBase) {
  const auto M = BetaAdaptedMatrix(1, {{TrigPolynomial::cosine(2 * kPi) + TrigPolynomial::constant(2.0), 0}},
                                   ScalingBase::real(2.5));
  EXPECT_THROW(joint_period_certificate(M, 1), Error);
}

TEST(JointPeriod, ZeroTranslation) {
  const auto M = bernoulli(0.2);
  const auto c = joint_period_certificate(M, 1);
  const std::size_t ns[] = {5, 10, 20};
  const auto r = joint_period_verify(M, 1, c, 0, ns, {.tau_count = 1, .grid_points = 16});
  EXPECT_EQ(r.tau, 0.0);
  EXPECT_EQ(r.max_deviation, 0.0);
}

TEST(JointPeriod, IntegerBaseExactPeriods) {
  const auto M = scalar_two_plus_cos();
  const auto c = joint_period_certificate(M, 1);
  EXPECT_LT(c.script_C, 1e-6);
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 30; ++n) ns.push_back(n);
  const auto r = joint_period_verify(M, 1, c, 3, ns, {.tau_count = 8, .grid_points = 32});
  EXPECT_LE(r.max_deviation, 1e-10);
}

TEST(JointPeriod, GoldenBernoulliWithinConstant) {
  const auto M = bernoulli(0.2);
  const auto c = joint_period_certificate(M, 1);
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 40; ++n) ns.push_back(n);
  const auto r = joint_period_verify(M, 1, c, 8, ns, {.tau_count = 16, .grid_points = 64});
  EXPECT_LE(r.max_deviation, c.script_C);
  EXPECT_GT(r.max_deviation, 0.0);
}

TEST(JointPeriod, ViolationIsReported) {
  const auto M = bernoulli(0.2);
  auto c = joint_period_certificate(M, 1);
  c.script_C = 1e-9;
  const std::size_t ns[] = {20};
  try {
    joint_period_verify(M, 1, c, 8, ns, {.tau_count = 8, .grid_points = 8});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CertificateViolated);
  }
}
