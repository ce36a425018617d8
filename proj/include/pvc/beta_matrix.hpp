#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pvc/big_real.hpp"
#include "pvc/orbit.hpp"
#include "pvc/trig_polynomial.hpp"

namespace pvc {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// x -> h(beta^scale_exponent * x)
struct MatrixEntry {
  TrigPolynomial h;
  int scale_exponent = 0;
};

struct MatrixOptions {
  double holder_alpha = 1.0;
  std::optional<double> positivity_delta;
  /// When > 0, |det M| must stay above it on the check grid.
  double det_floor = 0.0;
  std::size_t grid_points = 10000;
};

/// The cocycle generator M(x): a d x d matrix of entries h_ij(beta^l_ij x)
/// whose h_ij share a common period. Entries are evaluated from orbit
/// phases u_l = frac(beta^l x / period), never from beta^l x in doubles.
class BetaAdaptedMatrix {
 public:
  BetaAdaptedMatrix(int dim, std::vector<MatrixEntry> entries, ScalingBase base, MatrixOptions opts = {});

  static BetaAdaptedMatrix constant(const CMatrix& A, ScalingBase base, MatrixOptions opts = {});

  int dim() const { return dim_; }
  const MatrixEntry& entry(int i, int j) const { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
  const ScalingBase& base() const { return base_; }
  const Period& period() const { return period_; }
  double holder_alpha() const { return opts_.holder_alpha; }
  const std::optional<double>& positivity_delta() const { return opts_.positivity_delta; }
  const MatrixOptions& options() const { return opts_; }

  int max_scale_exponent() const { return max_ell_; }
  bool is_constant() const { return active_.empty(); }
  /// Distinct exponents of the non-constant entries, increasing.
  const std::vector<int>& active_exponents() const { return active_; }
  /// sup over phase of |d h_ij / du| (u in period units).
  double entry_phase_derivative(int i, int j) const;

  /// Direct evaluation, for moderate |x|.
  CMatrix at(double x) const;
  /// Evaluation from phases indexed by scale exponent (size > max exponent).
  CMatrix at_phases(std::span<const double> u_by_ell) const;

  /// M(beta^k x) for k = 0..n-1, given u_j = frac(beta^j x / period) for
  /// j = 0..n-1+max_scale_exponent.
  std::vector<CMatrix> from_orbit_phases(std::span<const double> u, std::size_t n) const;
  std::vector<CMatrix> along_orbit(const BigReal& x, std::size_t n) const;
  std::vector<CMatrix> along_orbit(double x, std::size_t n) const;

  /// Phase-torus grid over the active exponents: about `target` nodes,
  /// each a vector of phases indexed by scale exponent.
  std::vector<std::vector<double>> torus_nodes(std::size_t target) const;

  double min_abs_det_on_grid() const;

 private:
  struct Compiled {
    std::vector<std::int64_t> harmonics;
    std::vector<cplx> coeffs;
    cplx constant = 0;
    bool is_const = true;
  };
  cplx eval_entry(std::size_t idx, double u) const;

  int dim_;
  std::vector<MatrixEntry> entries_;
  ScalingBase base_;
  MatrixOptions opts_;
  Period period_;
  std::vector<Compiled> compiled_;
  int max_ell_ = 0;
  std::vector<int> active_;
};

}  // namespace pvc
