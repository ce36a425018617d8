#include "pvc/certificate.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "pvc/error.hpp"
#include "pvc/parallel.hpp"
#include "pvc/pisot.hpp"
#include "pvc/product.hpp"

namespace pvc {
namespace {

constexpr double kSlack = 1.01;

struct Extremes {
  double smax, smin;
};

Extremes singular_extremes(const CMatrix& A) {
  if (A.rows() == 1) return {std::abs(A(0, 0)), std::abs(A(0, 0))};
  if (A.rows() == 2) {
    const double smax = operator_norm(A);
    const double det = std::abs(A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0));
    return {smax, smax > 0 ? det / smax : 0.0};
  }
  Eigen::JacobiSVD<CMatrix> svd(A);
  const auto& s = svd.singularValues();
  return {s(0), s(s.size() - 1)};
}

// log |M(x_1) ... M(x_n) v| in the chosen vector norm
double log_apply(const BetaAdaptedMatrix& M, std::span<const double> xs, const CVector& v, bool l1) {
  auto norm = [l1](const CVector& w) { return l1 ? w.cwiseAbs().sum() : w.norm(); };
  CVector w = v;
  double acc = std::log(norm(w));
  w /= norm(w);
  for (std::size_t k = xs.size(); k-- > 0;) {
    w = M.at(xs[k]) * w;
    const double s = norm(w);
    require(std::isfinite(s), ErrorCode::NonFinite, "non-finite product");
    if (s == 0) return -INFINITY;
    acc += std::log(s);
    w /= s;
  }
  return acc;
}

CMatrix wedge(const CMatrix& A, int q) { return exterior_power(A, q); }

}  // namespace

DistortionResult distortion_bound(const BetaAdaptedMatrix& M, std::span<const double> xs,
                                  std::span<const double> ys, const CVector& v, const DistortionOptions& opts) {
  require(xs.size() == ys.size(), ErrorCode::InvalidArgument, "xs and ys differ in length");
  require(v.size() == M.dim(), ErrorCode::InvalidArgument, "vector dimension mismatch");
  require(v.norm() > 0, ErrorCode::ZeroVector, "v must be nonzero");
  DistortionResult r;

  if (!opts.positive_path) {
    double C = 0, D = 0;
    for (const auto& u : M.torus_nodes(opts.grid_points)) {
      const auto e = singular_extremes(M.at_phases(u));
      require(e.smin > 0, ErrorCode::SingularFactor, "M(x) is singular on the grid");
      C = std::max(C, 1 / e.smin);
      D = std::max(D, e.smax / e.smin);
    }
    C *= kSlack;
    D *= kSlack;
    for (std::span<const double> pts : {xs, ys})
      for (double x : pts) {
        const auto e = singular_extremes(M.at(x));
        require(e.smin > 0, ErrorCode::SingularFactor, "M(x) is singular at a sample point");
        C = std::max(C, 1 / e.smin);
        D = std::max(D, e.smax / e.smin);
      }
    require(D <= opts.d_cap, ErrorCode::UnboundedD,
            "sup |M| |M^-1| = " + std::to_string(D) + " exceeds the cap");
    double s = 0, Dk = 1;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      Dk *= D;
      const double theta = operator_norm(M.at(xs[k]) - M.at(ys[k]));
      r.theta_sum += theta;
      s += Dk * theta;
    }
    r.C = C;
    r.D = D;
    r.bound = std::exp(C * s);
    r.actual_ratio = std::exp(log_apply(M, xs, v, false) - log_apply(M, ys, v, false));
    return r;
  }

  require(M.positivity_delta().has_value(), ErrorCode::InvalidArgument,
          "the positive path needs positivity_delta");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    require(v(i).imag() == 0 && v(i).real() >= 0, ErrorCode::NegativeEntries, "v must be nonnegative");
  double delta = *M.positivity_delta();
  auto check = [](const CMatrix& A) {
    for (Eigen::Index i = 0; i < A.size(); ++i) {
      const cplx z = A.data()[i];
      require(std::fabs(z.imag()) <= 1e-12 && z.real() >= -1e-12, ErrorCode::NegativeEntries,
              "matrix has a negative or non-real entry");
    }
  };
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const CMatrix A = M.at(xs[k]), B = M.at(ys[k]);
    check(A);
    check(B);
    for (Eigen::Index i = 0; i < B.size(); ++i)
      if (std::abs(B.data()[i]) > 1e-12) delta = std::min(delta, B.data()[i].real());
    const double theta = l1_norm(A - B);
    r.theta_sum += theta;
  }
  r.delta = delta;
  r.bound = std::exp(r.theta_sum / delta);
  r.actual_ratio = std::exp(log_apply(M, xs, v, true) - log_apply(M, ys, v, true));
  return r;
}

JointPeriodCertificate joint_period_certificate(const BetaAdaptedMatrix& M, int q, const CertificateOptions& opts) {
  require(M.base().is_pisot(), ErrorCode::InvalidArgument, "joint-period certificates need a Pisot base");
  const int d = M.dim();
  require(q >= 1 && q <= d, ErrorCode::InvalidArgument, "q out of range");
  const PisotNumber& p = M.base().pisot();
  const double rho = p.rho();

  JointPeriodCertificate c;
  c.q = q;
  c.lattice_level = opts.lattice_level;
  c.rho_alpha = std::pow(rho, M.holder_alpha());

  const auto& active = M.active_exponents();
  std::vector<double> G(active.size(), 0.0);
  double S = 0, D = 0;
  const double h = 1e-6;
  for (auto u : M.torus_nodes(opts.grid_points)) {
    const CMatrix A = wedge(M.at_phases(u), q);
    Eigen::FullPivLU<CMatrix> lu(A);
    require(lu.isInvertible(), ErrorCode::SingularFactor, "M(x) is singular on the grid");
    const double inv = inf_norm(lu.inverse());
    S = std::max(S, inv);
    D = std::max(D, inf_norm(A) * inv);
    for (std::size_t a = 0; a < active.size(); ++a) {
      const auto ell = static_cast<std::size_t>(active[a]);
      const double u0 = u[ell];
      u[ell] = u0 + h;
      const CMatrix Ap = wedge(M.at_phases(u), q);
      u[ell] = u0 - h;
      const CMatrix Am = wedge(M.at_phases(u), q);
      u[ell] = u0;
      G[a] = std::max(G[a], inf_norm(Ap - Am) / (2 * h));
    }
  }
  c.S = S * kSlack;
  c.D = D * kSlack;
  for (std::size_t a = 0; a < active.size(); ++a) c.C_q += kSlack * G[a] * std::pow(rho, active[a]);

  if (rho > 0) {
    const auto lattice = translation_lattice(p, opts.lattice_level);
    double cp = measure_lattice_constant(p, lattice, 40);
    for (const auto& tau : lattice) cp = std::max(cp, lattice_decay_distance(p, tau, 0));
    c.C_prime = cp * kSlack;
  }

  const double N = static_cast<double>(combinations(d, q).size());
  if (*c.D * c.rho_alpha < 1) {
    c.kind = CertificateKind::Contraction;
    c.script_C = c.S * c.C_q * c.C_prime / (1 - *c.D * c.rho_alpha) + std::log(N) + 1e-8;
    return c;
  }
  if (q == 1 && M.positivity_delta()) {
    c.kind = CertificateKind::Positivity;
    c.delta = *M.positivity_delta();
    double g = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        g = std::max(g, M.entry_phase_derivative(i, j) * std::pow(rho, M.entry(i, j).scale_exponent));
    c.script_C = g * c.C_prime / (*c.delta * (1 - rho)) + std::log(static_cast<double>(d)) + 1e-8;
    return c;
  }
  throw Error(ErrorCode::NoCertificate, "D rho^alpha = " + std::to_string(*c.D * c.rho_alpha) +
                                            " >= 1 and no positivity certificate applies");
}

VerifyReport joint_period_verify(const BetaAdaptedMatrix& M, int q, const JointPeriodCertificate& cert, int m,
                                 std::span<const std::size_t> n_list, const VerifyOptions& opts) {
  require(M.base().is_pisot(), ErrorCode::InvalidArgument, "joint-period verification needs a Pisot base");
  require(q >= 1 && q <= M.dim(), ErrorCode::InvalidArgument, "q out of range");
  require(!n_list.empty(), ErrorCode::InvalidArgument, "empty n list");
  require(opts.grid_points >= 1 && opts.tau_count >= 1, ErrorCode::InvalidArgument, "empty verification grid");
  std::vector<std::size_t> ns(n_list.begin(), n_list.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  require(ns.front() >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
  const std::size_t n_max = ns.back();

  const PisotNumber& p = M.base().pisot();
  const auto lattice = translation_lattice(p, m);
  std::vector<std::size_t> picks;
  if (lattice.size() <= opts.tau_count) {
    for (std::size_t i = 0; i < lattice.size(); ++i) picks.push_back(i);
  } else {
    for (std::size_t i = 0; i < opts.tau_count; ++i)
      picks.push_back(opts.tau_count == 1 ? 0 : i * (lattice.size() - 1) / (opts.tau_count - 1));
  }

  const double P = M.period().value();
  double tau_max = 0;
  for (const auto& t : lattice) tau_max = std::max(tau_max, std::fabs(static_cast<double>(t.value)));
  const mpfr_prec_t bits = orbit_precision(M.base(), P * (tau_max + 1),
                                           n_max + static_cast<std::size_t>(M.max_scale_exponent())) + 64;
  const BigReal Pb = M.period().value_big(bits);

  const std::size_t G = opts.grid_points;
  std::vector<BigReal> xs;
  std::vector<std::vector<double>> base(G);
  for (std::size_t g = 0; g < G; ++g) {
    BigReal x = Pb;
    x.mul_d((static_cast<double>(g) + 0.5) / static_cast<double>(G));
    xs.push_back(x);
  }
  parallel_for(G, opts.threads, [&](std::size_t g) { base[g] = log_norms_at(M.along_orbit(xs[g], n_max), q, ns); });

  std::vector<VerifyReport> best(picks.size());
  parallel_for(picks.size(), opts.threads, [&](std::size_t t) {
    const auto& tau = lattice[picks[t]];
    BigReal shift = lattice_value_big(p, tau, bits);
    shift *= Pb;
    auto& b = best[t];
    b.tau = static_cast<double>(tau.value);
    for (std::size_t g = 0; g < G; ++g) {
      const auto f = log_norms_at(M.along_orbit(xs[g] + shift, n_max), q, ns);
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dev = std::fabs(f[i] - base[g][i]);
        if (dev > b.max_deviation || b.n == 0) {
          b.max_deviation = std::max(b.max_deviation, dev);
          b.n = ns[i];
          b.x = xs[g].to_double();
        }
      }
    }
  });
  VerifyReport out;
  for (const auto& b : best)
    if (b.max_deviation >= out.max_deviation) out = b;
  require(out.max_deviation <= 1.1 * cert.script_C, ErrorCode::CertificateViolated,
          "max |f_n(x+tau) - f_n(x)| = " + std::to_string(out.max_deviation) + " exceeds 1.1 * " +
              std::to_string(cert.script_C));
  return out;
}

}  // namespace pvc
