#pragma once

#include <cstddef>
#include <vector>

#include "pvc/beta_matrix.hpp"
#include "pvc/product.hpp"

namespace pvc {

struct OseledecSpectrum {
  std::vector<double> exponents;  // increasing
  std::vector<int> multiplicities;
  /// filtration[r]: orthonormal columns spanning V^(r+1); the last one is C^d.
  std::vector<CMatrix> filtration;
  /// (1/n) log sigma_i, decreasing
  std::vector<double> singular_rates;
  /// (1/n) log |det P_n(x)|
  double log_det_rate = 0;
  double cluster_tol = 0;
  std::size_t n_used = 0;
  double x = 0;
};

/// cluster_tol <= 0 selects 5 / n.
OseledecSpectrum oseledec_at(const BetaAdaptedMatrix& M, const BigReal& x, std::size_t n, double cluster_tol = 0);
OseledecSpectrum oseledec_at(const BetaAdaptedMatrix& M, double x, std::size_t n, double cluster_tol = 0);

/// Orthonormal basis of the column span of A (A assumed full column rank).
CMatrix orthonormalize(const CMatrix& A);
/// Largest principal angle from span(A) into span(B), dim A <= dim B, both
/// given by orthonormal columns. Zero iff span(A) is contained in span(B).
double principal_angle(const CMatrix& A, const CMatrix& B);

/// (1/n) log |P_n(x) v| / |v|, propagating v with per-step rescaling.
double growth_rate(const BetaAdaptedMatrix& M, const BigReal& x, std::size_t n, const CVector& v);
/// (1/n) log |P_n(x) v| / |v| for v in V^(r+1) (v is projected onto it),
/// computed as a ratio of exterior-product volumes against the faster
/// directions, which stays accurate when v lies in a slow subspace.
double filtered_growth_rate(const BetaAdaptedMatrix& M, const OseledecSpectrum& s, const BigReal& x,
                            std::size_t r, const CVector& v);
/// Index r of the exponent nearest to the growth rate of v.
int growth_class(const OseledecSpectrum& s, double rate);

}  // namespace pvc
