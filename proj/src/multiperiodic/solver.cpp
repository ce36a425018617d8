#include "pvc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pvc/error.hpp"
#include "pvc/product.hpp"

namespace pvc {
namespace {

double max_norm(const CVector& v) { return v.cwiseAbs().maxCoeff(); }

double measure_tail_constant(const MultiperiodicEquation& eq, const CVector& v) {
  const double beta = eq.base().beta();
  double c = 0;
  constexpr int kGrid = 32;
  for (int g = -kGrid; g <= kGrid; ++g) {
    if (g == 0) continue;
    const double x = static_cast<double>(g) / kGrid;
    CMatrix Q = CMatrix::Identity(eq.dim(), eq.dim());
    CVector prev = v;
    double s = x, scale = 1;
    for (int n = 1; n <= 60; ++n) {
      s /= beta;
      scale *= beta;
      Q = Q * eq.matrix_at(s);
      const CVector cur = Q * v;
      const double diff = max_norm(cur - prev);
      if (diff > 1e-13 * max_norm(cur)) c = std::max(c, diff * scale / std::fabs(x));
      prev = cur;
    }
  }
  return 2 * c;
}

}  // namespace

SolutionEvaluator::SolutionEvaluator(MultiperiodicEquation eq, SolveOptions opts)
    : eq_(std::move(eq)), opts_(opts), companion_(companion_matrix(eq_)) {
  require(opts_.tol > 0, ErrorCode::InvalidArgument, "tol must be positive");
  const auto simple = check_simple_eigenvalue(eq_);
  require(simple.is_simple, ErrorCode::NotSimpleEigenvalue,
          "eigenvalue 1 of M(0) is not simple: sum j f_j(0) = " + std::to_string(simple.derivative));
  const int d = eq_.dim();
  v_ = CVector::Ones(d);
  require(max_norm(eq_.matrix_at(0.0) * v_ - v_) <= 1e-10, ErrorCode::NonPositiveEigenvector,
          "the all-ones vector is not fixed by M(0)");
  c_prime_ = measure_tail_constant(eq_, v_);

  double sup_m = 0;
  for (const auto& u : companion_.torus_nodes(4096)) sup_m = std::max(sup_m, inf_norm(companion_.at_phases(u)));
  residual_tol_ = opts_.tol * (1 + sup_m);
}

std::pair<std::size_t, std::size_t> SolutionEvaluator::plan(double x, double a_norm) const {
  const double beta = eq_.base().beta();
  std::size_t m = 0;
  double xr = std::fabs(x);
  while (xr > 1) {
    xr /= beta;
    ++m;
  }
  std::size_t n = 1;
  const double need = c_prime_ * xr * beta * a_norm / ((beta - 1) * opts_.tol);
  if (need > 1) n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log(need) / std::log(beta))));
  return {m, n};
}

CVector SolutionEvaluator::compute(double x) const {
  require(std::isfinite(x), ErrorCode::NonFinite, "x must be finite");
  if (x == 0) return v_;
  const double beta = eq_.base().beta();
  const int d = eq_.dim();
  CMatrix A = CMatrix::Identity(d, d);
  double s = x;
  while (std::fabs(s) > 1) {
    s /= beta;
    A = A * eq_.matrix_at(s);
  }
  const auto [m, n] = plan(x, inf_norm(A));
  (void)m;
  std::vector<double> args(n);
  double t = s;
  for (std::size_t k = 0; k < n; ++k) args[k] = (t /= beta);
  CVector w = v_;
  for (std::size_t k = n; k-- > 0;) w = eq_.matrix_at(args[k]) * w;
  return A * w;
}

CVector SolutionEvaluator::G(double x) const {
  if (opts_.cache_limit > 0) {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(x); it != cache_.end()) return it->second;
  }
  CVector g = compute(x);
  if (opts_.cache_limit > 0) {
    std::unique_lock lock(mu_);
    if (cache_.size() < opts_.cache_limit) cache_.emplace(x, g);
  }
  return g;
}

std::size_t SolutionEvaluator::depth(double x) const {
  if (x == 0) return 0;
  const double beta = eq_.base().beta();
  const int d = eq_.dim();
  CMatrix A = CMatrix::Identity(d, d);
  double s = x;
  while (std::fabs(s) > 1) {
    s /= beta;
    A = A * eq_.matrix_at(s);
  }
  const auto [m, n] = plan(x, inf_norm(A));
  return m + n;
}

double SolutionEvaluator::residual(double x) const {
  const double y = x / eq_.base().beta();
  return max_norm(G(x) - eq_.matrix_at(y) * G(y));
}

SolutionEvaluator solve(const MultiperiodicEquation& eq, double tol) { return solve(eq, SolveOptions{.tol = tol}); }

SolutionEvaluator solve(const MultiperiodicEquation& eq, SolveOptions opts) { return SolutionEvaluator(eq, opts); }

AsymptoticResult asymptotic_exponent(const SolutionEvaluator& s, const BigReal& x, std::size_t n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "n_max must be >= 1");
  require(x.sign() != 0, ErrorCode::InvalidArgument, "x must be nonzero");
  const auto& eq = s.equation();
  AsymptoticResult r;
  r.x = x.to_double();
  CVector w = s.G(r.x);
  double acc = w.cwiseAbs().sum();
  require(acc > 1e-14, ErrorCode::ZeroVector, "G(x) vanishes");
  w /= acc;
  acc = std::log(acc);

  BigReal X = x;
  X.round_to(std::max(x.precision(), orbit_precision(eq.base(), std::fabs(r.x), n_max + eq.dim() + 1)));
  const BigReal y = companion_variable(eq, X);
  const auto factors = s.companion().along_orbit(y, n_max);
  r.h.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    w = factors[n - 1] * w;
    const double nrm = w.cwiseAbs().sum();
    require(std::isfinite(nrm), ErrorCode::NonFinite, "non-finite vector");
    require(nrm > 0, ErrorCode::ZeroVector, "G(beta^n x) vanishes at n = " + std::to_string(n));
    acc += std::log(nrm);
    w /= nrm;
    r.h.push_back(acc / static_cast<double>(n));
  }
  r.estimate = r.h.back();
  r.trend = r.estimate - r.h[std::max<std::size_t>(n_max / 2, 1) - 1];
  return r;
}

AsymptoticResult asymptotic_exponent(const SolutionEvaluator& s, double x, std::size_t n_max) {
  return asymptotic_exponent(s, BigReal(x, 64), n_max);
}

}  // namespace pvc
