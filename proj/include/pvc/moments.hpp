#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pvc/beta_matrix.hpp"
#include "pvc/solver.hpp"

namespace pvc {

struct QuadratureOptions {
  /// Accept a subinterval when |K15 - G7| <= rel_tol * K15 for every output.
  double rel_tol = 1e-6;
  int max_depth = 12;
  std::size_t max_intervals = std::size_t{1} << 22;
  std::size_t threads = 0;
};

/// Breakpoints 0 = t_0 < ... < t_m = 1: level-`level` beta-intervals for a
/// non-integer Pisot base, a uniform grid of about beta^level cells
/// otherwise. The level drops until the count fits max_intervals.
std::vector<double> quadrature_breakpoints(const ScalingBase& base, int level, std::size_t max_intervals);

/// Integrand writing log f_k(x) for k = 0..outputs-1 (-inf for zero).
using LogIntegrand = std::function<void(double x, std::span<double> out)>;

/// log int_0^1 f_k for each output, by adaptive Gauss-Kronrod on every cell,
/// accumulated in the log domain. Throws QuadratureFailure naming the cell.
std::vector<double> log_integrate(std::span<const double> breakpoints, std::size_t outputs,
                                  const LogIntegrand& f, const QuadratureOptions& opts = {});

struct MomentGrowth {
  double q = 0;
  /// z[n-1] = log int_0^1 |P_n(x)|^q dx, spectral norm, n = 1..n_max
  std::vector<double> z;
  /// min over n of z_n / n
  double fekete_rate = 0;
  /// z_{n_max} - z_{n_max - 1}
  double last_difference = 0;
  /// max over n + m <= n_max of z_{n+m} - z_n - z_m
  double log_C = 0;
  std::size_t intervals = 0;
  int level = 0;
};

MomentGrowth moment_growth(const BetaAdaptedMatrix& M, double q, std::size_t n_max,
                           const QuadratureOptions& opts = {});

/// max over n + m <= limit of z_{n+m} - z_n - z_m (z indexed from n = 1).
double submultiplicativity_constant(std::span<const double> z, std::size_t limit);

struct MomentLadderRow {
  std::size_t n = 0;
  double T = 0;  // beta^n
  /// (1/log T) int_0^T |F|^q
  double literal = 0;
  /// (1/log T) log int_0^T |F|^q
  double log_form = 0;
};

struct MomentLadder {
  double q = 0;
  std::vector<MomentLadderRow> rows;
  /// relative change between the last two rows
  double literal_change = 0;
  double log_change = 0;
  bool literal_stable = false;
  bool log_stable = false;
};

/// Along T = beta^n: int_0^T |F|^q = T int_0^1 |[P_n(y) G(y)]_1|^q dy.
/// Requires each f_j identically zero or positive and a primitive zero
/// pattern (NotPrimitive otherwise). A column is stable when its last
/// relative change is below stable_tol.
MomentLadder moment_integral_F(const SolutionEvaluator& s, double q, std::span<const std::size_t> n_ladder,
                               const QuadratureOptions& opts = {}, double stable_tol = 0.05);

}  // namespace pvc
