#include "pvc/product.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "pvc/error.hpp"

namespace pvc {

double operator_norm(const CMatrix& A) {
  if (A.size() == 0) return 0;
  if (A.rows() == 1 && A.cols() == 1) return std::abs(A(0, 0));
  if (A.rows() == 2 && A.cols() == 2) {
    // sigma_max^2 = (F + sqrt(F^2 - 4|det|^2)) / 2 with F the squared Frobenius norm
    const double f = A.squaredNorm();
    const double det = std::abs(A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0));
    const double disc = std::max(0.0, (f - 2 * det) * (f + 2 * det));
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

double inf_norm(const CMatrix& A) { return A.cwiseAbs().rowwise().sum().maxCoeff(); }

double l1_norm(const CMatrix& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

std::vector<std::vector<int>> combinations(int d, int q) {
  require(q >= 0 && q <= d, ErrorCode::InvalidArgument, "combination size out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = q - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == d - q + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < q; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

CMatrix exterior_power(const CMatrix& A, int q) {
  require(A.rows() == A.cols(), ErrorCode::InvalidArgument, "exterior power needs a square matrix");
  const int d = static_cast<int>(A.rows());
  require(q >= 1 && q <= d, ErrorCode::InvalidArgument, "exterior power order out of range");
  if (q == 1) return A;
  if (q == d) {
    CMatrix m(1, 1);
    m(0, 0) = A.determinant();
    return m;
  }
  const auto idx = combinations(d, q);
  const auto N = static_cast<Eigen::Index>(idx.size());
  CMatrix out(N, N);
  CMatrix sub(q, q);
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c) {
      const auto& I = idx[static_cast<std::size_t>(r)];
      const auto& J = idx[static_cast<std::size_t>(c)];
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) sub(a, b) = A(I[static_cast<std::size_t>(a)], J[static_cast<std::size_t>(b)]);
      out(r, c) = q == 2 ? sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0) : sub.determinant();
    }
  return out;
}

ProductAccumulator::ProductAccumulator(int dim) : unit_(CMatrix::Identity(dim, dim)) {}

void ProductAccumulator::push(const CMatrix& factor) {
  const double fn = factor.norm();
  require(std::isfinite(fn), ErrorCode::NonFinite, "non-finite factor");
  require(fn > 0, ErrorCode::SingularFactor, "factor with zero norm");
  unit_ = (factor / fn) * unit_;
  const double s = unit_.norm();
  require(std::isfinite(s), ErrorCode::NonFinite, "non-finite product");
  require(s > 0, ErrorCode::SingularFactor, "product collapsed to zero");
  unit_ /= s;
  log_scale_ += std::log(fn) + std::log(s);
  ++n_;
}

double ProductAccumulator::log_norm() const { return log_scale_ + std::log(operator_norm(unit_)); }

NormalizedProduct ProductAccumulator::snapshot() const {
  const double op = operator_norm(unit_);
  return {log_scale_ + std::log(op), unit_ / op, n_};
}

NormalizedProduct product_of(std::span<const CMatrix> factors) {
  require(!factors.empty(), ErrorCode::InvalidArgument, "dimension unknown for an empty product");
  ProductAccumulator acc(static_cast<int>(factors[0].rows()));
  for (const auto& f : factors) acc.push(f);
  return acc.snapshot();
}

NormalizedProduct product(const BetaAdaptedMatrix& M, const BigReal& x, std::size_t n) {
  if (n == 0) return {0.0, CMatrix::Identity(M.dim(), M.dim()), 0};
  const auto f = M.along_orbit(x, n);
  return product_of(f);
}

NormalizedProduct product(const BetaAdaptedMatrix& M, double x, std::size_t n) {
  return product(M, BigReal(x, 64), n);
}

std::vector<double> log_norms_at(std::span<const CMatrix> factors, int q, std::span<const std::size_t> checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  if (factors.empty()) {
    for (std::size_t c : checkpoints) {
      require(c == 0, ErrorCode::InvalidArgument, "checkpoint beyond the available factors");
      out.push_back(0.0);
    }
    return out;
  }
  const int d = static_cast<int>(factors[0].rows());
  require(q >= 1 && q <= d, ErrorCode::InvalidArgument, "q out of range");
  std::size_t next = 0;
  auto flush_zero = [&] {
    while (next < checkpoints.size() && checkpoints[next] == 0) {
      out.push_back(0.0);
      ++next;
    }
  };
  flush_zero();
  if (q == d) {
    // determinant is multiplicative: a plain sum of logs
    double s = 0;
    for (std::size_t k = 0; k < factors.size() && next < checkpoints.size(); ++k) {
      const double a = std::abs(d == 1 ? factors[k](0, 0) : factors[k].determinant());
      require(std::isfinite(a), ErrorCode::NonFinite, "non-finite determinant");
      require(a > 0, ErrorCode::SingularFactor, "singular factor");
      s += std::log(a);
      while (next < checkpoints.size() && checkpoints[next] == k + 1) {
        out.push_back(s);
        ++next;
      }
    }
  } else {
    ProductAccumulator acc(static_cast<int>(combinations(d, q).size()));
    for (std::size_t k = 0; k < factors.size() && next < checkpoints.size(); ++k) {
      acc.push(q == 1 ? factors[k] : exterior_power(factors[k], q));
      while (next < checkpoints.size() && checkpoints[next] == k + 1) {
        out.push_back(acc.log_norm());
        ++next;
      }
    }
  }
  require(next == checkpoints.size(), ErrorCode::InvalidArgument, "checkpoints must be sorted and <= factors");
  return out;
}

std::vector<double> subadditive_sequence(std::span<const CMatrix> factors, int q) {
  std::vector<std::size_t> cps(factors.size());
  for (std::size_t i = 0; i < cps.size(); ++i) cps[i] = i + 1;
  return log_norms_at(factors, q, cps);
}

std::vector<double> subadditive_sequence(const BetaAdaptedMatrix& M, int q, const BigReal& x, std::size_t n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "n_max must be >= 1");
  require(q >= 1 && q <= M.dim(), ErrorCode::InvalidArgument, "q out of range");
  const auto f = M.along_orbit(x, n_max);
  return subadditive_sequence(f, q);
}

std::vector<double> subadditive_sequence(const BetaAdaptedMatrix& M, int q, double x, std::size_t n_max) {
  return subadditive_sequence(M, q, BigReal(x, 64), n_max);
}

}  // namespace pvc
