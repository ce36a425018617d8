#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "pvc/beta_matrix.hpp"

namespace pvc {

/// 2, 4, ..., 2^K
std::vector<std::size_t> default_ladder(int K = 10);

struct EstimationSpec {
  std::vector<std::size_t> ladder = default_ladder(10);
  std::size_t samples = 1000;
  double window_lo = 1.0;
  double window_hi = 2.0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware parallelism
  /// 0 selects 5 / max(ladder).
  double cluster_tol = 0;
  /// Samples whose per-n values are kept as diagnostic rows.
  std::size_t diagnostic_samples = 4;
};

struct DiagnosticRow {
  std::size_t n = 0;
  int q = 1;
  double x = 0;
  double f_n = 0;
  double running = 0;  // running min over the ladder of f_n / n for this x
};

struct LyapunovResult {
  int q = 1;
  /// min over the ladder of the sample mean of f_n / n
  double estimate = 0;
  std::size_t argmin_n = 0;
  /// 2 L_{2n} - L_n on the last doubling step of the ladder (L_last otherwise)
  double extrapolated = 0;
  std::vector<std::size_t> n;
  std::vector<double> per_n;
  /// std dev over x-samples of f_n(x) / n
  std::vector<double> dispersion;
  std::vector<DiagnosticRow> rows;
  std::size_t samples_used = 0;
};

LyapunovResult lyapunov_top(const BetaAdaptedMatrix& M, int q, const EstimationSpec& spec);
/// Shares the x-samples and orbit factors across all q in `qs`.
std::vector<LyapunovResult> lyapunov_all(const BetaAdaptedMatrix& M, std::span<const int> qs,
                                         const EstimationSpec& spec);

struct ExponentClusters {
  std::vector<double> exponents;  // increasing
  std::vector<int> multiplicities;
};
/// Groups sorted values whose consecutive gaps are <= tol; each group is
/// represented by its mean.
ExponentClusters cluster_exponents(std::span<const double> values, double tol);

struct SpectrumResult {
  std::vector<double> exponents;  // increasing
  std::vector<int> multiplicities;
  std::vector<double> sums;        // L_1 .. L_d
  std::vector<double> individual;  // L_q - L_{q-1}
  double cluster_tol = 0;
  std::vector<LyapunovResult> per_q;
};

SpectrumResult lyapunov_spectrum(const BetaAdaptedMatrix& M, const EstimationSpec& spec);

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticRow> rows);

}  // namespace pvc
