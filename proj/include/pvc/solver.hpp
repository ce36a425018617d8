#pragma once

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "pvc/multiperiodic.hpp"

namespace pvc {

struct SolveOptions {
  double tol = 1e-12;
  /// Entries kept in the G cache; 0 disables it.
  std::size_t cache_limit = 1 << 16;
};

/// G(x) = lim Q_n(x) v with Q_n(x) = M(x/beta) M(x/beta^2) ... M(x/beta^n),
/// F(x) = G_1(x).
class SolutionEvaluator {
 public:
  SolutionEvaluator(MultiperiodicEquation eq, SolveOptions opts);

  const MultiperiodicEquation& equation() const { return eq_; }
  /// Companion cocycle in y = x / beta^{d-1}.
  const BetaAdaptedMatrix& companion() const { return companion_; }
  const CVector& eigenvector() const { return v_; }
  /// C' in |Q_n(x)v - Q_{n-1}(x)v| <= C' |x| / beta^n, measured on [-1, 1].
  double tail_constant() const { return c_prime_; }
  double tol() const { return opts_.tol; }
  /// Bound on |G(x) - M(x/beta) G(x/beta)| for every evaluated x.
  double residual_tolerance() const { return residual_tol_; }

  CVector G(double x) const;
  cplx F(double x) const { return G(x)(0); }
  /// Number of matrix factors used for G(x).
  std::size_t depth(double x) const;
  /// |G(x) - M(x/beta) G(x/beta)| in the max norm.
  double residual(double x) const;

 private:
  CVector compute(double x) const;
  // (m, n'): x is divided m times to reach [-1, 1], then n' tail factors.
  std::pair<std::size_t, std::size_t> plan(double x, double a_norm) const;

  MultiperiodicEquation eq_;
  SolveOptions opts_;
  BetaAdaptedMatrix companion_;
  CVector v_;
  double c_prime_ = 0;
  double residual_tol_ = 0;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<double, CVector> cache_;
};

/// Throws NotSimpleEigenvalue or NonPositiveEigenvector.
SolutionEvaluator solve(const MultiperiodicEquation& eq, double tol = 1e-12);
SolutionEvaluator solve(const MultiperiodicEquation& eq, SolveOptions opts);

struct AsymptoticResult {
  /// h[n-1] = (1/n) log |G(beta^n x)|_1, n = 1..n_max
  std::vector<double> h;
  double estimate = 0;
  /// h at n_max minus h at n_max / 2
  double trend = 0;
  double x = 0;
};

/// Propagates G(x) through the companion cocycle: G(beta^n x) = P_n(x) G(x).
/// x is taken as exact. A double carries 53 bits, so for an integer base
/// pass a BigReal with about n_max log2(beta) random bits.
AsymptoticResult asymptotic_exponent(const SolutionEvaluator& s, double x, std::size_t n_max);
AsymptoticResult asymptotic_exponent(const SolutionEvaluator& s, const BigReal& x, std::size_t n_max);

}  // namespace pvc
