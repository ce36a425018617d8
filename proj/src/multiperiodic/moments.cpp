#include "pvc/moments.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pvc/error.hpp"
#include "pvc/parallel.hpp"
#include "pvc/product.hpp"

namespace pvc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// Nodes on [-1, 1]: index 0 is the centre, then (+x_i, -x_i) pairs.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> kronrod;
  std::vector<double> gauss;  // zero where the node is not a Gauss node
};

const Rule& rule() {
  static const Rule r = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& ka = GK::abscissa();
    const auto& kw = GK::weights();
    const auto& gw = G::weights();
    Rule out;
    for (std::size_t i = 0; i < ka.size(); ++i) {
      const double g = i % 2 == 0 ? gw[i / 2] : 0.0;
      out.nodes.push_back(ka[i]);
      out.kronrod.push_back(kw[i]);
      out.gauss.push_back(g);
      if (i > 0) {
        out.nodes.push_back(-ka[i]);
        out.kronrod.push_back(kw[i]);
        out.gauss.push_back(g);
      }
    }
    return out;
  }();
  return r;
}

void integrate_cell(double a, double b, int depth, std::size_t outputs, const LogIntegrand& f,
                    const QuadratureOptions& opts, std::vector<double>& acc) {
  const Rule& R = rule();
  const std::size_t m = R.nodes.size();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<double> vals(m * outputs);
  for (std::size_t i = 0; i < m; ++i)
    f(c + h * R.nodes[i], std::span<double>(vals.data() + i * outputs, outputs));

  std::vector<double> out(outputs);
  bool ok = true;
  for (std::size_t k = 0; k < outputs; ++k) {
    double top = kNegInf;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = vals[i * outputs + k];
      require(!std::isnan(v) && v != std::numeric_limits<double>::infinity(), ErrorCode::NonFinite,
              "integrand is not finite");
      top = std::max(top, v);
    }
    if (top == kNegInf) {
      out[k] = kNegInf;
      continue;
    }
    double K = 0, G = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = std::exp(vals[i * outputs + k] - top);
      K += R.kronrod[i] * e;
      G += R.gauss[i] * e;
    }
    if (std::fabs(K - G) > opts.rel_tol * K + 1e-15) ok = false;
    out[k] = top + std::log(K * h);
  }
  if (!ok) {
    if (depth >= opts.max_depth) {
      std::ostringstream os;
      os.precision(17);
      os << "adaptive quadrature did not converge on [" << a << ", " << b << "]";
      throw Error(ErrorCode::QuadratureFailure, os.str());
    }
    integrate_cell(a, c, depth + 1, outputs, f, opts, acc);
    integrate_cell(c, b, depth + 1, outputs, f, opts, acc);
    return;
  }
  for (std::size_t k = 0; k < outputs; ++k) acc[k] = log_add(acc[k], out[k]);
}

// u_k = frac(beta^k x / P), k < count; long double when beta^count |x| / P stays small.
std::vector<double> phases(const ScalingBase& base, double x, const Period& period, std::size_t count) {
  constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
  const long double P = static_cast<long double>(period.scale) * (period.two_pi ? kTwoPiL : 1.0L);
  const long double b = base.beta_ld();
  const long double top = std::pow(b, static_cast<long double>(count)) * std::fabs(static_cast<long double>(x)) / P;
  if (top > 1048576.0L) return orbit_phases(base, x, period, count);
  std::vector<double> u(count);
  long double t = static_cast<long double>(x) / P;
  for (std::size_t k = 0; k < count; ++k) {
    u[k] = static_cast<double>(t - std::floor(t));
    t *= b;
  }
  return u;
}

}  // namespace

std::vector<double> quadrature_breakpoints(const ScalingBase& base, int level, std::size_t max_intervals) {
  require(level >= 1, ErrorCode::InvalidArgument, "level must be >= 1");
  const double beta = base.beta();
  const bool beta_cells = base.is_pisot() && !base.is_integer();
  const double slack = beta_cells ? std::floor(beta) + 1 : 1;
  while (level > 1 && std::pow(beta, level) * slack > static_cast<double>(max_intervals)) --level;
  std::vector<double> t;
  if (beta_cells) {
    for (const auto& iv : enumerate_beta_intervals(base.pisot(), level)) t.push_back(static_cast<double>(iv.left));
    t.push_back(1.0);
    t.front() = 0.0;
  } else {
    const auto cells = static_cast<std::size_t>(std::ceil(std::pow(beta, level) - 1e-9));
    for (std::size_t i = 0; i <= cells; ++i) t.push_back(static_cast<double>(i) / static_cast<double>(cells));
  }
  return t;
}

std::vector<double> log_integrate(std::span<const double> breakpoints, std::size_t outputs,
                                  const LogIntegrand& f, const QuadratureOptions& opts) {
  require(breakpoints.size() >= 2, ErrorCode::InvalidArgument, "need at least one cell");
  const std::size_t cells = breakpoints.size() - 1;
  std::vector<std::vector<double>> part(cells);
  parallel_for(cells, opts.threads, [&](std::size_t i) {
    part[i].assign(outputs, kNegInf);
    integrate_cell(breakpoints[i], breakpoints[i + 1], 0, outputs, f, opts, part[i]);
  });
  std::vector<double> total(outputs, kNegInf);
  for (const auto& p : part)
    for (std::size_t k = 0; k < outputs; ++k) total[k] = log_add(total[k], p[k]);
  return total;
}

double submultiplicativity_constant(std::span<const double> z, std::size_t limit) {
  limit = std::min(limit, z.size());
  double c = kNegInf;
  for (std::size_t n = 1; n < limit; ++n)
    for (std::size_t m = 1; n + m <= limit; ++m) c = std::max(c, z[n + m - 1] - z[n - 1] - z[m - 1]);
  return c;
}

MomentGrowth moment_growth(const BetaAdaptedMatrix& M, double q, std::size_t n_max, const QuadratureOptions& opts) {
  require(q >= 0, ErrorCode::InvalidArgument, "q must be >= 0");
  require(n_max >= 2, ErrorCode::InvalidArgument, "n_max must be >= 2");
  MomentGrowth g;
  g.q = q;
  g.level = static_cast<int>(n_max) + M.max_scale_exponent();
  const auto t = quadrature_breakpoints(M.base(), g.level, opts.max_intervals);
  g.intervals = t.size() - 1;

  std::vector<std::size_t> checkpoints(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) checkpoints[n - 1] = n;
  const std::size_t count = n_max + static_cast<std::size_t>(M.max_scale_exponent());
  auto integrand = [&](double x, std::span<double> out) {
    if (q == 0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    const auto u = phases(M.base(), x, M.period(), count);
    const auto factors = M.from_orbit_phases(u, n_max);
    const auto logs = log_norms_at(factors, 1, checkpoints);
    for (std::size_t n = 0; n < n_max; ++n) out[n] = q * logs[n];
  };
  g.z = log_integrate(t, n_max, integrand, opts);

  g.fekete_rate = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= n_max; ++n) g.fekete_rate = std::min(g.fekete_rate, g.z[n - 1] / static_cast<double>(n));
  g.last_difference = g.z[n_max - 1] - g.z[n_max - 2];
  g.log_C = submultiplicativity_constant(g.z, n_max);
  return g;
}

MomentLadder moment_integral_F(const SolutionEvaluator& s, double q, std::span<const std::size_t> n_ladder,
                               const QuadratureOptions& opts, double stable_tol) {
  require(q >= 0, ErrorCode::InvalidArgument, "q must be >= 0");
  require(n_ladder.size() >= 2, ErrorCode::InvalidArgument, "the ladder needs at least two rungs");
  require(std::is_sorted(n_ladder.begin(), n_ladder.end()) && n_ladder.front() >= 1, ErrorCode::InvalidArgument,
          "the ladder must be increasing and start at n >= 1");
  const auto& eq = s.equation();
  // each f_j identically zero or strictly positive
  for (const auto& f : eq.determining()) {
    bool zero = true, positive = true;
    const double P = eq.period().value();
    for (int k = 0; k < 10000; ++k) {
      const cplx z = f(P * k / 10000.0);
      if (std::abs(z) >= 1e-12) zero = false;
      if (std::fabs(z.imag()) > 1e-12 || z.real() <= 0) positive = false;
    }
    require(zero || positive, ErrorCode::NotPrimitive, "every f_j must be identically zero or strictly positive");
  }
  require(pattern_primitive(eq), ErrorCode::NotPrimitive, "the zero pattern of M has no positive power");

  const std::size_t n_max = n_ladder.back();
  const int d = eq.dim();
  const auto& C = s.companion();
  const auto t = quadrature_breakpoints(eq.base(), static_cast<int>(n_max) + 1, opts.max_intervals);
  const std::size_t rungs = n_ladder.size();
  const double beta = eq.base().beta();
  const double shift = std::pow(beta, -(d - 1));

  auto integrand = [&](double y, std::span<double> out) {
    if (q == 0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    CVector w = s.G(y);
    const auto u = phases(eq.base(), y * shift, C.period(), n_max + static_cast<std::size_t>(C.max_scale_exponent()));
    const auto factors = C.from_orbit_phases(u, n_max);
    double acc = 0;
    std::size_t r = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      w = factors[n - 1] * w;
      const double nrm = w.cwiseAbs().maxCoeff();
      if (nrm > 0) {
        acc += std::log(nrm);
        w /= nrm;
      }
      while (r < rungs && n_ladder[r] == n) {
        const double a = std::abs(w(0));
        out[r++] = a > 0 ? q * (acc + std::log(a)) : kNegInf;
      }
    }
  };
  const auto logs = log_integrate(t, rungs, integrand, opts);

  MomentLadder L;
  L.q = q;
  for (std::size_t r = 0; r < rungs; ++r) {
    MomentLadderRow row;
    row.n = n_ladder[r];
    const double logT = static_cast<double>(row.n) * std::log(beta);
    row.T = std::exp(logT);
    const double log_int = logT + logs[r];
    row.literal = std::exp(log_int) / logT;
    row.log_form = log_int / logT;
    L.rows.push_back(row);
  }
  const auto& a = L.rows[rungs - 2];
  const auto& b = L.rows[rungs - 1];
  L.literal_change = std::fabs(b.literal - a.literal) / std::fabs(b.literal);
  L.log_change = std::fabs(b.log_form - a.log_form) / std::fabs(b.log_form);
  L.literal_stable = L.literal_change < stable_tol;
  L.log_stable = L.log_change < stable_tol;
  return L;
}

}  // namespace pvc
