#include "pvc/beta_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pvc/error.hpp"
#include "pvc/kernels.hpp"

namespace pvc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;

Period entries_period(const std::vector<MatrixEntry>& entries) {
  std::vector<TrigPolynomial> hs;
  hs.reserve(entries.size());
  for (const auto& e : entries) hs.push_back(e.h);
  return common_period(hs);
}

}  // namespace

BetaAdaptedMatrix::BetaAdaptedMatrix(int dim, std::vector<MatrixEntry> entries, ScalingBase base,
                                     MatrixOptions opts)
    : dim_(dim), entries_(std::move(entries)), base_(std::move(base)), opts_(opts) {
  require(dim_ >= 1, ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
  require(entries_.size() == static_cast<std::size_t>(dim_ * dim_), ErrorCode::InvalidArgument,
          "expected d*d entries");
  require(opts_.holder_alpha > 0 && opts_.holder_alpha <= 1, ErrorCode::InvalidArgument,
          "holder_alpha must lie in (0, 1]");
  require(opts_.grid_points >= 16, ErrorCode::InvalidArgument, "grid_points too small");
  for (const auto& e : entries_)
    require(e.scale_exponent >= 0, ErrorCode::InvalidArgument,
            "scale exponents must be >= 0; substitute x -> x / beta^k first");
  period_ = entries_period(entries_);

  std::set<int> active;
  compiled_.resize(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    max_ell_ = std::max(max_ell_, e.scale_exponent);
    auto& c = compiled_[i];
    const auto harm = e.h.harmonics(period_);
    for (std::size_t t = 0; t < harm.size(); ++t) {
      const cplx a = e.h.terms()[t].coeff;
      if (a == cplx(0)) continue;
      if (harm[t] == 0) {
        c.constant += a;
      } else {
        c.harmonics.push_back(harm[t]);
        c.coeffs.push_back(a);
      }
    }
    c.is_const = c.harmonics.empty();
    if (!c.is_const) {
      // fold the constant term into the kernel call
      c.harmonics.push_back(0);
      c.coeffs.push_back(c.constant);
      active.insert(e.scale_exponent);
    }
  }
  active_.assign(active.begin(), active.end());

  if (opts_.positivity_delta) {
    const double delta = *opts_.positivity_delta;
    require(delta > 0, ErrorCode::InvalidArgument, "positivity_delta must be > 0");
    std::vector<double> u(opts_.grid_points);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = static_cast<double>(k) / static_cast<double>(u.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      std::vector<cplx> v(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) v[k] = eval_entry(i, u[k]);
      const bool zero = std::all_of(v.begin(), v.end(), [](cplx z) { return std::abs(z) < 1e-12; });
      if (zero) continue;
      for (const auto& z : v)
        require(std::fabs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)) && z.real() >= delta - 1e-12,
                ErrorCode::InvalidArgument,
                "entry (" + std::to_string(i / static_cast<std::size_t>(dim_)) + "," +
                    std::to_string(i % static_cast<std::size_t>(dim_)) +
                    ") is neither identically zero nor >= positivity_delta");
    }
  }
  if (opts_.det_floor > 0) {
    const double m = min_abs_det_on_grid();
    require(m >= opts_.det_floor, ErrorCode::SingularFactor,
            "|det M| drops to " + std::to_string(m) + " below the declared floor");
  }
}

BetaAdaptedMatrix BetaAdaptedMatrix::constant(const CMatrix& A, ScalingBase base, MatrixOptions opts) {
  require(A.rows() == A.cols() && A.rows() >= 1, ErrorCode::InvalidArgument, "constant matrix must be square");
  const int d = static_cast<int>(A.rows());
  std::vector<MatrixEntry> e;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e.push_back({TrigPolynomial::constant(A(i, j)), 0});
  return BetaAdaptedMatrix(d, std::move(e), std::move(base), opts);
}

cplx BetaAdaptedMatrix::eval_entry(std::size_t idx, double u) const {
  const auto& c = compiled_[idx];
  if (c.is_const) return c.constant;
  cplx s = 0;
  for (std::size_t t = 0; t < c.harmonics.size(); ++t) {
    const double ku = static_cast<double>(c.harmonics[t]) * u;
    s += c.coeffs[t] * std::polar(1.0, kTwoPi * (ku - std::nearbyint(ku)));
  }
  return s;
}

double BetaAdaptedMatrix::entry_phase_derivative(int i, int j) const {
  const auto& c = compiled_[static_cast<std::size_t>(i * dim_ + j)];
  double s = 0;
  for (std::size_t t = 0; t < c.harmonics.size(); ++t)
    s += kTwoPi * std::fabs(static_cast<double>(c.harmonics[t])) * std::abs(c.coeffs[t]);
  return s;
}

CMatrix BetaAdaptedMatrix::at(double x) const {
  CMatrix m(dim_, dim_);
  double scale = 1.0;
  std::vector<double> powers(static_cast<std::size_t>(max_ell_) + 1);
  for (auto& p : powers) {
    p = scale;
    scale *= base_.beta();
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const auto& e = entry(i, j);
      m(i, j) = e.h(powers[static_cast<std::size_t>(e.scale_exponent)] * x);
    }
  return m;
}

CMatrix BetaAdaptedMatrix::at_phases(std::span<const double> u_by_ell) const {
  require(u_by_ell.size() > static_cast<std::size_t>(max_ell_), ErrorCode::InvalidArgument,
          "phase vector shorter than the largest scale exponent");
  CMatrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const auto idx = static_cast<std::size_t>(i * dim_ + j);
      m(i, j) = eval_entry(idx, u_by_ell[static_cast<std::size_t>(entries_[idx].scale_exponent)]);
    }
  return m;
}

std::vector<CMatrix> BetaAdaptedMatrix::from_orbit_phases(std::span<const double> u, std::size_t n) const {
  require(u.size() >= n + static_cast<std::size_t>(max_ell_), ErrorCode::InvalidArgument, "orbit too short");
  std::vector<CMatrix> out(n, CMatrix(dim_, dim_));
  std::vector<cplx> vals(n);
  for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
    const int i = static_cast<int>(idx) / dim_, j = static_cast<int>(idx) % dim_;
    const auto& c = compiled_[idx];
    if (c.is_const) {
      for (auto& m : out) m(i, j) = c.constant;
      continue;
    }
    const auto ell = static_cast<std::size_t>(entries_[idx].scale_exponent);
    kernels::eval_harmonics(c.harmonics, c.coeffs, u.subspan(ell, n), vals);
    for (std::size_t k = 0; k < n; ++k) {
      require(std::isfinite(vals[k].real()) && std::isfinite(vals[k].imag()), ErrorCode::NonFinite,
              "non-finite matrix entry");
      out[k](i, j) = vals[k];
    }
  }
  return out;
}

std::vector<CMatrix> BetaAdaptedMatrix::along_orbit(const BigReal& x, std::size_t n) const {
  if (is_constant()) return from_orbit_phases(std::vector<double>(n + static_cast<std::size_t>(max_ell_)), n);
  const auto u = orbit_phases(base_, x, period_, n + static_cast<std::size_t>(max_ell_));
  return from_orbit_phases(u, n);
}

std::vector<CMatrix> BetaAdaptedMatrix::along_orbit(double x, std::size_t n) const {
  return along_orbit(BigReal(x, 64), n);
}

std::vector<std::vector<double>> BetaAdaptedMatrix::torus_nodes(std::size_t target) const {
  const std::size_t K = active_.size();
  const std::size_t len = static_cast<std::size_t>(max_ell_) + 1;
  if (K == 0) return {std::vector<double>(len, 0.0)};
  auto g = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(target), 1.0 / static_cast<double>(K))));
  g = std::max<std::size_t>(g, 2);
  std::size_t total = 1;
  for (std::size_t k = 0; k < K; ++k) total *= g;
  std::vector<std::vector<double>> nodes;
  nodes.reserve(total);
  std::vector<std::size_t> idx(K, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> u(len, 0.0);
    for (std::size_t k = 0; k < K; ++k)
      u[static_cast<std::size_t>(active_[k])] = static_cast<double>(idx[k]) / static_cast<double>(g);
    nodes.push_back(std::move(u));
    for (std::size_t k = 0; k < K; ++k) {
      if (++idx[k] < g) break;
      idx[k] = 0;
    }
  }
  return nodes;
}

double BetaAdaptedMatrix::min_abs_det_on_grid() const {
  double m = INFINITY;
  for (const auto& u : torus_nodes(opts_.grid_points)) m = std::min(m, std::abs(at_phases(u).determinant()));
  return m;
}

}  // namespace pvc
