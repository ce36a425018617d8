#include "pvc/multiperiodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pvc/error.hpp"

namespace pvc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// identically zero on the grid, positive on the grid, or neither
enum class Sign { Zero, Positive, Other };

Sign classify(const TrigPolynomial& f, const Period& period, std::size_t grid) {
  const double P = period.value();
  bool zero = true;
  bool positive = true;
  for (std::size_t k = 0; k < grid; ++k) {
    const cplx z = f(P * static_cast<double>(k) / static_cast<double>(grid));
    if (std::abs(z) >= 1e-12) zero = false;
    if (std::fabs(z.imag()) > 1e-12 || z.real() <= 0) positive = false;
  }
  if (zero) return Sign::Zero;
  return positive ? Sign::Positive : Sign::Other;
}

}  // namespace

MultiperiodicEquation::MultiperiodicEquation(std::vector<TrigPolynomial> determining, ScalingBase base)
    : f_(std::move(determining)), base_(std::move(base)) {
  require(!f_.empty(), ErrorCode::InvalidArgument, "need at least one determining function");
  period_ = common_period(f_);
  cplx sum = 0;
  for (std::size_t j = 0; j < f_.size(); ++j) {
    const cplx v = f_[j](0.0);
    require(std::fabs(v.imag()) <= 1e-12 && v.real() >= -1e-12, ErrorCode::InvalidArgument,
            "f_" + std::to_string(j + 1) + "(0) must be real and nonnegative");
    sum += v;
  }
  require(std::abs(sum - cplx(1.0)) <= 1e-12, ErrorCode::InvalidArgument,
          "consistency f_1(0) + ... + f_d(0) = 1 fails");
}

CMatrix MultiperiodicEquation::matrix_at(double x) const {
  const int d = dim();
  CMatrix m = CMatrix::Zero(d, d);
  double s = x;
  for (int j = 0; j < d; ++j) {
    m(0, j) = f_[static_cast<std::size_t>(j)](s);
    s /= base_.beta();
  }
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  return m;
}

BetaAdaptedMatrix companion_matrix(const MultiperiodicEquation& eq, MatrixOptions opts) {
  const int d = eq.dim();
  std::vector<MatrixEntry> e(static_cast<std::size_t>(d * d), {TrigPolynomial::constant(0.0), 0});
  for (int j = 1; j <= d; ++j) e[static_cast<std::size_t>(j - 1)] = {eq.f(j), d - j};
  for (int i = 1; i < d; ++i) e[static_cast<std::size_t>(i * d + i - 1)] = {TrigPolynomial::constant(1.0), 0};
  return BetaAdaptedMatrix(d, std::move(e), eq.base(), opts);
}

BigReal companion_variable(const MultiperiodicEquation& eq, const BigReal& x) {
  return divide_beta_power(eq.base(), x, eq.dim() - 1);
}

SimpleEigenvalue check_simple_eigenvalue(const MultiperiodicEquation& eq) {
  SimpleEigenvalue r;
  for (int j = 1; j <= eq.dim(); ++j) r.derivative += j * eq.f(j)(0.0).real();
  r.is_simple = r.derivative > 1e-12;
  return r;
}

bool pattern_primitive(const MultiperiodicEquation& eq, std::size_t grid_points) {
  const int d = eq.dim();
  Eigen::MatrixXi A = Eigen::MatrixXi::Zero(d, d);
  for (int j = 1; j <= d; ++j) A(0, j - 1) = classify(eq.f(j), eq.period(), grid_points) == Sign::Zero ? 0 : 1;
  for (int i = 1; i < d; ++i) A(i, i - 1) = 1;
  Eigen::MatrixXi P = A;
  for (int l = 1; l <= d * d; ++l) {
    if ((P.array() > 0).all()) return true;
    P = (P * A).unaryExpr([](int v) { return v > 0 ? 1 : 0; });
  }
  return false;
}

bool theoremB_gate(const MultiperiodicEquation& eq, std::size_t grid_points) {
  if (!eq.base().is_pisot()) return false;
  for (const auto& f : eq.determining())
    if (classify(f, eq.period(), grid_points) == Sign::Other) return false;
  return pattern_primitive(eq, grid_points);
}

TheoremCGate theoremC_gate(const MultiperiodicEquation& eq, std::size_t grid_points) {
  require(eq.base().is_pisot(), ErrorCode::InvalidArgument, "the Theorem C condition needs a Pisot base");
  TheoremCGate g;
  g.rho = eq.base().rho();
  const int d = eq.dim();
  MatrixOptions opts;
  opts.grid_points = std::max<std::size_t>(grid_points, 16);
  const auto M = companion_matrix(eq, opts);
  for (const auto& u : M.torus_nodes(grid_points)) {
    const CMatrix A = M.at_phases(u);
    double head = 1, all = 0;
    for (int j = 0; j < d; ++j) {
      all += std::abs(A(0, j));
      if (j < d - 1) head += std::abs(A(0, j));
    }
    const double last = std::abs(A(0, d - 1));
    if (last < 1e-12) {
      g.division_near_zero = true;
      g.sup_value = std::numeric_limits<double>::infinity();
      g.holds = false;
      return g;
    }
    g.sup_value = std::max(g.sup_value, head * all / last);
  }
  g.holds = g.rho == 0 ? true : 1.01 * g.sup_value < 1 / g.rho;
  return g;
}

MultiperiodicEquation bernoulli_convolution(double p, int a, int b, ScalingBase base) {
  require(p > 0 && p < 1, ErrorCode::InvalidArgument, "p must lie in (0, 1)");
  std::vector<TrigPolynomial> f = {TrigPolynomial::exponential(kTwoPi * a, p),
                                   TrigPolynomial::exponential(kTwoPi * b, 1 - p)};
  MultiperiodicEquation eq(std::move(f), std::move(base));
  eq.max_norm_distortion = (1 + p) / (1 - p);
  return eq;
}

}  // namespace pvc
