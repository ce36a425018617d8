#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pvc/beta_matrix.hpp"

namespace pvc {

/// P = exp(log_norm) * unit_matrix with ||unit_matrix|| = 1 (spectral norm).
struct NormalizedProduct {
  double log_norm = 0;
  CMatrix unit_matrix;
  std::size_t n = 0;

  CMatrix value() const { return std::exp(log_norm) * unit_matrix; }
};

/// Largest singular value.
double operator_norm(const CMatrix& A);
/// Max row sum (the operator norm induced by the max vector norm).
double inf_norm(const CMatrix& A);
/// Max column sum (induced by the l1 vector norm).
double l1_norm(const CMatrix& A);

/// q-subsets of {0..d-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int d, int q);
/// Matrix of q x q minors det A[I, J], multi-indices in lexicographic order.
CMatrix exterior_power(const CMatrix& A, int q);

/// Left-multiplying accumulator: after push(M) the product is M * (previous).
/// Rescales by the Frobenius norm after each factor; the spectral norm is
/// taken only when a value is read.
class ProductAccumulator {
 public:
  explicit ProductAccumulator(int dim);
  void push(const CMatrix& factor);
  /// log of the spectral norm of the current product.
  double log_norm() const;
  NormalizedProduct snapshot() const;
  std::size_t size() const { return n_; }

 private:
  CMatrix unit_;
  double log_scale_ = 0;
  std::size_t n_ = 0;
};

/// P_n(x) = M(beta^{n-1} x) ... M(beta x) M(x).
NormalizedProduct product(const BetaAdaptedMatrix& M, const BigReal& x, std::size_t n);
NormalizedProduct product(const BetaAdaptedMatrix& M, double x, std::size_t n);
/// factors[n-1] ... factors[1] factors[0]
NormalizedProduct product_of(std::span<const CMatrix> factors);

/// f_n^(q)(x) = log ||(P_n(x))^q|| for n = 1..n_max, via products of the
/// exterior-power factors.
std::vector<double> subadditive_sequence(const BetaAdaptedMatrix& M, int q, const BigReal& x, std::size_t n_max);
std::vector<double> subadditive_sequence(const BetaAdaptedMatrix& M, int q, double x, std::size_t n_max);
/// Same, from precomputed factors M(beta^k x).
std::vector<double> subadditive_sequence(std::span<const CMatrix> factors, int q);

/// log ||(P_n)^q|| at the requested n (sorted, each <= factors.size()).
std::vector<double> log_norms_at(std::span<const CMatrix> factors, int q, std::span<const std::size_t> checkpoints);

}  // namespace pvc
