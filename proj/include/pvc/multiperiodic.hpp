#pragma once

#include <optional>
#include <vector>

#include "pvc/beta_matrix.hpp"
#include "pvc/orbit.hpp"
#include "pvc/trig_polynomial.hpp"

namespace pvc {

/// F(x) = sum_j f_j(x / beta^j) F(x / beta^j), j = 1..d.
class MultiperiodicEquation {
 public:
  MultiperiodicEquation(std::vector<TrigPolynomial> determining, ScalingBase base);

  int dim() const { return static_cast<int>(f_.size()); }
  const std::vector<TrigPolynomial>& determining() const { return f_; }
  const TrigPolynomial& f(int j) const { return f_[static_cast<std::size_t>(j - 1)]; }
  const ScalingBase& base() const { return base_; }
  const Period& period() const { return period_; }

  /// Companion matrix in the original variable: first row f_j(x / beta^{j-1}),
  /// ones on the subdiagonal. G(beta x) = M(x) G(x).
  CMatrix matrix_at(double x) const;

  /// Set by bernoulli_convolution: sup |M| |M^-1| in the max norm.
  std::optional<double> max_norm_distortion;

 private:
  std::vector<TrigPolynomial> f_;
  ScalingBase base_;
  Period period_;
};

/// The companion matrix as a cocycle generator in y = x / beta^{d-1}:
/// entry (0, j-1) is f_j(beta^{d-j} y), so every scale exponent is >= 0.
BetaAdaptedMatrix companion_matrix(const MultiperiodicEquation& eq, MatrixOptions opts = {});
/// y = x / beta^{d-1}, at the precision of x.
BigReal companion_variable(const MultiperiodicEquation& eq, const BigReal& x);

struct SimpleEigenvalue {
  bool is_simple = false;
  double derivative = 0;  // sum_j j f_j(0)
};
SimpleEigenvalue check_simple_eigenvalue(const MultiperiodicEquation& eq);

/// The 0/1 pattern of M (f_j not identically zero) has a strictly positive
/// power of order <= d^2.
bool pattern_primitive(const MultiperiodicEquation& eq, std::size_t grid_points = 10000);

/// Every f_j is identically zero or strictly positive on a grid over one
/// period, the zero pattern is primitive, and the base is Pisot.
bool theoremB_gate(const MultiperiodicEquation& eq, std::size_t grid_points = 10000);

struct TheoremCGate {
  bool holds = false;
  /// Grid sup of (1 + |f_1(x)| + ... + |f_{d-1}(x/beta^{d-2})|)(|f_1(x)| + ... + |f_d(x/beta^{d-1})|)
  /// / |f_d(x/beta^{d-1})|; +inf when |f_d| nearly vanishes.
  double sup_value = 0;
  bool division_near_zero = false;
  double rho = 0;
};
/// Grid over the phase torus of the companion entries; holds compares the
/// sup inflated by 1% with 1/rho.
TheoremCGate theoremC_gate(const MultiperiodicEquation& eq, std::size_t grid_points = 10000);

/// f_1 = p e^{2 pi i a x}, f_2 = (1-p) e^{2 pi i b x}: the Fourier transform
/// of the self-similar measure for x -> (x+a)/beta, x -> (x+b)/beta^2.
MultiperiodicEquation bernoulli_convolution(double p, int a, int b, ScalingBase base);

}  // namespace pvc
