#include "pvc/oseledec.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>

#include "pvc/error.hpp"
#include "pvc/lyapunov.hpp"

namespace pvc {
namespace {

// Top-k right singular subspace of the product, read off the top right
// singular vector of the k-th exterior power (a decomposable k-vector).
CMatrix top_right_subspace(std::span<const CMatrix> factors, int d, int k) {
  if (k == d) return CMatrix::Identity(d, d);
  ProductAccumulator acc(static_cast<int>(combinations(d, k).size()));
  for (const auto& f : factors) acc.push(k == 1 ? f : exterior_power(f, k));
  const auto unit = acc.snapshot().unit_matrix;
  Eigen::JacobiSVD<CMatrix> svd(unit, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1)
    require(sv(0) - sv(1) > 1e-13 * sv(0), ErrorCode::DegenerateSVD,
            "top singular values of the order-" + std::to_string(k) + " exterior product coincide");
  const CVector omega = svd.matrixV().col(0);
  if (k == 1) return omega.normalized();

  const auto sets = combinations(d, k);
  std::map<std::vector<int>, Eigen::Index> index;
  for (std::size_t i = 0; i < sets.size(); ++i) index[sets[i]] = static_cast<Eigen::Index>(i);
  const auto faces = combinations(d, k - 1);
  CMatrix span(d, static_cast<Eigen::Index>(faces.size()));
  span.setZero();
  for (std::size_t c = 0; c < faces.size(); ++c) {
    const auto& J = faces[c];
    for (int i = 0; i < d; ++i) {
      if (std::find(J.begin(), J.end(), i) != J.end()) continue;
      std::vector<int> S = J;
      S.insert(std::upper_bound(S.begin(), S.end(), i), i);
      const auto below = std::count_if(J.begin(), J.end(), [i](int j) { return j < i; });
      const double sign = below % 2 == 0 ? 1.0 : -1.0;
      span(i, static_cast<Eigen::Index>(c)) = sign * omega(index.at(S));
    }
  }
  Eigen::JacobiSVD<CMatrix> basis(span, Eigen::ComputeThinU);
  return basis.matrixU().leftCols(k);
}

CMatrix complement(const CMatrix& W, int d) {
  if (W.cols() == 0) return CMatrix::Identity(d, d);
  Eigen::HouseholderQR<CMatrix> qr(W);
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(d, d);
  return Q.rightCols(d - W.cols());
}

// Pluecker coordinates of the column span of A (d x m).
CVector wedge_coords(const CMatrix& A) {
  const int d = static_cast<int>(A.rows()), m = static_cast<int>(A.cols());
  const auto sets = combinations(d, m);
  CVector w(static_cast<Eigen::Index>(sets.size()));
  CMatrix sub(m, m);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int a = 0; a < m; ++a) sub.row(a) = A.row(sets[i][static_cast<std::size_t>(a)]);
    w(static_cast<Eigen::Index>(i)) = sub.determinant();
  }
  return w;
}

double log_push(std::span<const CMatrix> factors, CVector w, int q) {
  double acc = std::log(w.norm());
  w.normalize();
  for (const auto& f : factors) {
    w = (q == 1 ? f : exterior_power(f, q)) * w;
    const double s = w.norm();
    require(std::isfinite(s) && s > 0, ErrorCode::NonFinite, "volume collapsed or overflowed");
    acc += std::log(s);
    w /= s;
  }
  return acc;
}

}  // namespace

OseledecSpectrum oseledec_at(const BetaAdaptedMatrix& M, const BigReal& x, std::size_t n, double cluster_tol) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
  const int d = M.dim();
  const auto factors = M.along_orbit(x, n);
  const std::size_t cp[] = {n};

  OseledecSpectrum s;
  s.n_used = n;
  s.x = x.to_double();
  s.cluster_tol = cluster_tol > 0 ? cluster_tol : 5.0 / static_cast<double>(n);
  const double nn = static_cast<double>(n);
  double prev = 0;
  for (int q = 1; q <= d; ++q) {
    const double Lq = log_norms_at(factors, q, cp)[0];
    s.singular_rates.push_back((Lq - prev) / nn);
    prev = Lq;
  }
  s.log_det_rate = prev / nn;

  // groups follow the singular rates from the top down
  std::vector<double> desc = s.singular_rates;
  std::sort(desc.begin(), desc.end(), std::greater<>());
  std::vector<int> sizes;  // top-down
  std::vector<double> means;
  for (std::size_t i = 0; i < desc.size();) {
    std::size_t j = i + 1;
    while (j < desc.size() && desc[j - 1] - desc[j] <= s.cluster_tol) ++j;
    double sum = 0;
    for (std::size_t t = i; t < j; ++t) sum += desc[t];
    means.push_back(sum / static_cast<double>(j - i));
    sizes.push_back(static_cast<int>(j - i));
    i = j;
  }
  s.exponents.assign(means.rbegin(), means.rend());
  s.multiplicities.assign(sizes.rbegin(), sizes.rend());

  // V^(r) is the orthogonal complement of the top (d - dim V^(r)) right singular directions
  int dim = 0;
  for (std::size_t r = 0; r < s.multiplicities.size(); ++r) {
    dim += s.multiplicities[r];
    const int k = d - dim;
    if (k == 0) {
      s.filtration.push_back(CMatrix::Identity(d, d));
    } else {
      s.filtration.push_back(complement(top_right_subspace(factors, d, k), d));
    }
  }
  return s;
}

OseledecSpectrum oseledec_at(const BetaAdaptedMatrix& M, double x, std::size_t n, double cluster_tol) {
  return oseledec_at(M, BigReal(x, 64), n, cluster_tol);
}

CMatrix orthonormalize(const CMatrix& A) {
  Eigen::HouseholderQR<CMatrix> qr(A);
  return qr.householderQ() * CMatrix::Identity(A.rows(), A.cols());
}

double principal_angle(const CMatrix& A, const CMatrix& B) {
  require(A.rows() == B.rows(), ErrorCode::InvalidArgument, "subspaces live in different dimensions");
  require(A.cols() <= B.cols(), ErrorCode::InvalidArgument, "first subspace must not be larger");
  if (A.cols() == 0) return 0;
  const CMatrix residual = A - B * (B.adjoint() * A);
  return std::asin(std::min(1.0, operator_norm(residual)));
}

double growth_rate(const BetaAdaptedMatrix& M, const BigReal& x, std::size_t n, const CVector& v) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
  const double v0 = v.norm();
  require(v0 > 0, ErrorCode::ZeroVector, "zero vector");
  CVector w = v / v0;
  double acc = 0;
  for (const auto& f : M.along_orbit(x, n)) {
    w = f * w;
    const double s = w.norm();
    require(std::isfinite(s), ErrorCode::NonFinite, "non-finite vector");
    require(s > 0, ErrorCode::SingularFactor, "vector annihilated");
    acc += std::log(s);
    w /= s;
  }
  return acc / static_cast<double>(n);
}

double filtered_growth_rate(const BetaAdaptedMatrix& M, const OseledecSpectrum& s, const BigReal& x,
                            std::size_t r, const CVector& v) {
  require(r < s.filtration.size(), ErrorCode::InvalidArgument, "filtration index out of range");
  const int d = M.dim();
  const CMatrix& V = s.filtration[r];
  const CVector vv = V * (V.adjoint() * v);
  require(vv.norm() > 0, ErrorCode::ZeroVector, "v has no component in the subspace");
  const auto factors = M.along_orbit(x, s.n_used);
  const CMatrix W = complement(V, d);
  const auto k = static_cast<int>(W.cols());
  CMatrix Wv(d, k + 1);
  Wv << W, vv / vv.norm();
  double rate = log_push(factors, wedge_coords(Wv), k + 1);
  if (k > 0) rate -= log_push(factors, wedge_coords(W), k);
  return rate / static_cast<double>(s.n_used);
}

int growth_class(const OseledecSpectrum& s, double rate) {
  int best = 0;
  for (std::size_t r = 1; r < s.exponents.size(); ++r)
    if (std::fabs(s.exponents[r] - rate) < std::fabs(s.exponents[static_cast<std::size_t>(best)] - rate))
      best = static_cast<int>(r);
  return best;
}

}  // namespace pvc
