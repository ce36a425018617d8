#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pvc/beta_matrix.hpp"

namespace pvc {

struct DistortionOptions {
  /// Euclidean path when false; l1 path for nonnegative matrices when true.
  bool positive_path = false;
  double d_cap = 1e6;
  std::size_t grid_points = 10000;
};

struct DistortionResult {
  double bound = 1;
  double actual_ratio = 1;
  /// Euclidean path: C = sup |M^-1|, D = sup |M| |M^-1|. Positive path: delta used.
  double C = 0;
  double D = 0;
  double delta = 0;
  double theta_sum = 0;
};

/// Compares |M(x_1) ... M(x_n) v| with |M(y_1) ... M(y_n) v|.
DistortionResult distortion_bound(const BetaAdaptedMatrix& M, std::span<const double> xs,
                                  std::span<const double> ys, const CVector& v,
                                  const DistortionOptions& opts = {});

enum class CertificateKind { Contraction, Positivity };

struct JointPeriodCertificate {
  CertificateKind kind = CertificateKind::Contraction;
  int q = 1;
  /// sup of cond(M^q) in the max-row norm (contraction); always reported.
  std::optional<double> D;
  double rho_alpha = 0;
  std::optional<double> delta;
  double script_C = 0;
  int lattice_level = 8;
  /// measured constants entering script_C
  double S = 0;        // sup |(M^q)^-1|
  double C_q = 0;      // sum over scale exponents of sup |d M^q / du_l| rho^l
  double C_prime = 0;  // sup dist(beta^k tau, Z) / rho^k over the lattice
};

struct CertificateOptions {
  int lattice_level = 8;
  std::size_t grid_points = 10000;
};

/// Sup quantities are grid suprema over the phase torus inflated by 1%.
JointPeriodCertificate joint_period_certificate(const BetaAdaptedMatrix& M, int q,
                                                const CertificateOptions& opts = {});

struct VerifyOptions {
  std::size_t tau_count = 64;
  std::size_t grid_points = 256;
  std::size_t threads = 0;
};

struct VerifyReport {
  double max_deviation = 0;
  double tau = 0;
  std::size_t n = 0;
  double x = 0;
};

/// max over tau in translation_lattice(m), n in n_list and grid x of
/// |f_n^(q)(x + tau P) - f_n^(q)(x)|, P the common period. Throws
/// CertificateViolated when it exceeds 1.1 script_C.
VerifyReport joint_period_verify(const BetaAdaptedMatrix& M, int q, const JointPeriodCertificate& cert, int m,
                                 std::span<const std::size_t> n_list, const VerifyOptions& opts = {});

}  // namespace pvc
