// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "pvc/certificate.hpp"
#include "pvc/cli.hpp"
#include "pvc/error.hpp"
#include "pvc/lyapunov.hpp"
#include "pvc/moments.hpp"
#include "pvc/multiperiodic.hpp"
#include "pvc/oseledec.hpp"
#include "pvc/product.hpp"
#include "pvc/solver.hpp"

using namespace pvc;

namespace {

constexpr double kPi = std::numbers::pi;

ScalingBase two() { return make_pisot({1, -2}); }
ScalingBase golden() { return make_pisot({1, -1, -1}); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BetaAdaptedMatrix two_plus_cos() {
  return BetaAdaptedMatrix(1, {{TrigPolynomial::constant(2.0) + TrigPolynomial::cosine(2 * kPi), 0}}, two());
}

BetaAdaptedMatrix bernoulli_matrix(double p) {
  std::vector<MatrixEntry> e = {
      {TrigPolynomial::exponential(2 * kPi, p), 1},
      {TrigPolynomial::exponential(2 * kPi, 1 - p), 0},
      {TrigPolynomial::constant(1.0), 0},
      {TrigPolynomial::constant(0.0), 0},
  };
  return BetaAdaptedMatrix(2, std::move(e), golden());
}

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome viete() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = solve(MultiperiodicEquation({TrigPolynomial::cosine(1.0)}, two()), 1e-12);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.1 + (20 - 0.1) * i / 199.0;
    worst = std::max(worst, std::abs(s.F(x) - std::sin(x) / x));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 1.0, fmt("max |F - sinc| = %.2e over 200 points, %.3f s", worst, t)};
}

Outcome scalar_lyapunov() {
  const auto t0 = std::chrono::steady_clock::now();
  EstimationSpec spec;
  spec.ladder = default_ladder(10);
  spec.samples = 10000;
  spec.seed = 1;
  const auto r = lyapunov_top(two_plus_cos(), 1, spec);
  const double t = seconds_since(t0);
  const double exact = std::log((2 + std::sqrt(3.0)) / 2);
  const double err = std::abs(r.estimate - exact);
  return {err <= 5e-3 && t < 30, fmt("estimate %.6f vs %.6f (err %.2e), ", r.estimate, exact, err) + fmt("%.2f s", t)};
}

Outcome constant_spectrum() {
  const auto M = BetaAdaptedMatrix::constant(diag2(3, 1.0 / 3), two());
  EstimationSpec spec;
  spec.ladder = {64};
  spec.samples = 16;
  const auto s = lyapunov_spectrum(M, spec);
  const double l3 = std::log(3.0);
  bool ok = s.exponents.size() == 2 && s.multiplicities == std::vector<int>{1, 1};
  double err = 0;
  if (ok) err = std::max(std::abs(s.exponents[0] + l3), std::abs(s.exponents[1] - l3));
  const auto o = oseledec_at(M, 1.3, 64);
  ok = ok && err <= 1e-6 && o.filtration.size() == 2 && o.filtration[0].cols() == 1;
  double angle = 1;
  if (ok) {
    const CMatrix e2 = CMatrix::Identity(2, 2).col(1);
    angle = principal_angle(o.filtration[0], e2);
    ok = ok && o.filtration[1].cols() == 2;
  }
  ok = ok && angle <= 1e-6;
  return {ok, fmt("exponent err %.2e, multiplicities {1,1}, axis angle %.2e", err, angle)};
}

Outcome pisot_exactness() {
  const auto g = make_pisot({1, -1, -1});
  BigInt a = 2, b = 1;  // Lucas L_0, L_1
  int mismatches = 0;
  for (int n = 1; n <= 90; ++n) {
    if (trace_power(g, n) != b) ++mismatches;
    BigInt c = a + b;
    a = b;
    b = c;
  }
  double worst = 0;
  for (int n = 1; n <= 60; ++n) worst = std::max(worst, pv_defect(g, n) / std::pow(g.rho(), n));
  return {mismatches == 0 && worst <= 1 + 1e-9,
          fmt("Lucas mismatches %.0f for n <= 90, max |beta^n - F_n| / rho^n = %.6f for n <= 60", mismatches, worst)};
}

Outcome interval_geometry() {
  const auto g = make_pisot({1, -1, -1});
  const auto iv = enumerate_beta_intervals(g, 8);
  double gap = std::abs(static_cast<double>(iv.front().left)) + std::abs(static_cast<double>(iv.back().right) - 1);
  for (std::size_t i = 1; i < iv.size(); ++i)
    gap = std::max(gap, std::abs(static_cast<double>(iv[i].left - iv[i - 1].right)));
  const double C = measure_interval_constant(g, 8);
  const double scale = std::pow(static_cast<double>(g.beta()), 8);
  bool inside = true;
  for (const auto& I : iv) {
    const double s = static_cast<double>(I.length()) * scale;
    inside = inside && s >= 1 / C - 1e-12 && s <= C + 1e-12;
  }
  return {gap <= 1e-12 && inside,
          fmt("%.0f intervals, max gap/overlap %.2e, C = %.9f", static_cast<double>(iv.size()), gap, C)};
}

Outcome distortion() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(0, 10), ud(-1e-3, 1e-3);
  std::size_t bad = 0;
  double worst = 0;

  // bounded-distortion path
  const auto B = bernoulli_matrix(0.2);
  CVector v(2);
  v << 1, 0.5;
  const double rho = make_pisot({1, -1, -1}).rho();
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> xs(20), ys(20);
    for (std::size_t k = 0; k < 20; ++k) {
      xs[k] = ux(rng);
      ys[k] = xs[k] + ud(rng) * std::pow(rho, static_cast<double>(k));
    }
    const auto r = distortion_bound(B, xs, ys, v, {.grid_points = 256});
    worst = std::max(worst, r.actual_ratio / r.bound);
    if (r.actual_ratio > r.bound * (1 + 1e-9)) ++bad;
  }

  // positive path
  std::vector<MatrixEntry> e = {
      {TrigPolynomial::constant(1.0) + TrigPolynomial::cosine(2 * kPi, 0.5), 0},
      {TrigPolynomial::constant(0.75) + TrigPolynomial::sine(2 * kPi, 0.25), 1},
      {TrigPolynomial::constant(0.8) + TrigPolynomial::cosine(2 * kPi, 0.3), 0},
      {TrigPolynomial::constant(1.0), 0},
  };
  MatrixOptions o;
  o.positivity_delta = 0.5;
  const BetaAdaptedMatrix P(2, std::move(e), golden(), o);
  std::uniform_real_distribution<double> uv(0.1, 5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> xs(20), ys(20);
    for (std::size_t k = 0; k < 20; ++k) {
      xs[k] = ux(rng);
      ys[k] = xs[k] + ud(rng) * std::pow(0.5, static_cast<double>(k));
    }
    CVector w(2);
    w << uv(rng), uv(rng);
    const auto r = distortion_bound(P, xs, ys, w, {.positive_path = true, .grid_points = 256});
    worst = std::max(worst, r.actual_ratio / r.bound);
    if (r.actual_ratio > r.bound * (1 + 1e-9)) ++bad;
  }
  return {bad == 0, fmt("2 x 1000 trials, %.0f violations, max actual/bound = %.4f", static_cast<double>(bad), worst)};
}

Outcome joint_period() {
  const auto M = bernoulli_matrix(0.2);
  const auto c = joint_period_certificate(M, 1);
  const double Drho = c.D ? *c.D * c.rho_alpha : INFINITY;
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 40; ++n) ns.push_back(n);
  double dev = INFINITY;
  try {
    dev = joint_period_verify(M, 1, c, 8, ns, {.tau_count = 64, .grid_points = 256}).max_deviation;
  } catch (const Error&) {
  }
  bool half_refused = false;
  try {
    joint_period_certificate(bernoulli_matrix(0.5), 1);
  } catch (const Error& e) {
    half_refused = e.code() == ErrorCode::NoCertificate;
  }
  const bool ok = c.kind == CertificateKind::Contraction && Drho < 1 && dev <= c.script_C && half_refused;
  return {ok, fmt("D rho = %.4f, max deviation %.4f <= C = %.4f", Drho, dev, c.script_C) +
                  (half_refused ? ", p = 0.5 refused" : ", p = 0.5 NOT refused")};
}

Outcome moments() {
  const auto M = two_plus_cos();
  const auto g1 = moment_growth(M, 1.0, 16);
  const auto g2 = moment_growth(M, 2.0, 16);
  bool ok = true;
  for (const auto* g : {&g1, &g2})
    for (std::size_t n = 1; n < 16; ++n)
      for (std::size_t m = 1; n + m <= 16; ++m)
        ok = ok && g->z[n + m - 1] <= g->z[n - 1] + g->z[m - 1] + g->log_C + 1e-12;
  const double rate_err = std::abs(g1.z[15] / 16 - std::log(2.0));
  ok = ok && rate_err <= 1e-2;
  return {ok, fmt("log C = %.4f (q=1), %.4f (q=2); |z_16/16 - log 2| = %.2e", g1.log_C, g2.log_C, rate_err)};
}

Outcome constancy() {
  cli::ExperimentConfig c;
  c.command = cli::Command::Bernoulli;
  c.seed = 3;
  c.base.minpoly = {1, -1, -1};
  c.estimation.points = 50;
  c.estimation.n_max = 200;
  const auto r = cli::run(c);
  const bool both = r.results.contains("lambda_estimate") && r.results.contains("lyapunov_estimate");
  const double sd = r.results.value("lambda_dispersion", INFINITY);
  const bool certified = r.warnings.empty() && !r.certificates.empty();
  const double lam = both ? r.results["lambda_estimate"].get<double>() : NAN;
  const double lyap = both ? r.results["lyapunov_estimate"].get<double>() : NAN;
  return {both && certified && sd <= 0.05,
          fmt("lambda %.4f (sd %.4f over 50 x) beside Lyapunov %.4f", lam, sd, lyap)};
}

Outcome exterior() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1, 1);
  auto random4 = [&] {
    CMatrix m(4, 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(u(rng), u(rng));
    return m;
  };
  double func = 0, det = 0;
  for (int t = 0; t < 100; ++t) {
    const auto A = random4(), B = random4();
    for (int q = 1; q <= 4; ++q) {
      const CMatrix lhs = exterior_power(A * B, q), rhs = exterior_power(A, q) * exterior_power(B, q);
      func = std::max(func, (lhs - rhs).norm() / rhs.norm());
    }
    std::vector<CMatrix> fs;
    for (int k = 0; k < 12; ++k) fs.push_back(random4());
    const auto f = subadditive_sequence(fs, 4);
    double s = 0;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      s += std::log(std::abs(fs[k].determinant()));
      det = std::max(det, std::abs(f[k] - s));
    }
  }
  return {func <= 1e-9 && det <= 1e-9, fmt("functoriality rel err %.2e, determinant err %.2e", func, det)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Viete oracle", viete},
      {"scalar Lyapunov oracle", scalar_lyapunov},
      {"constant-matrix spectrum", constant_spectrum},
      {"Pisot exactness", pisot_exactness},
      {"beta-interval geometry", interval_geometry},
      {"distortion bounds", distortion},
      {"joint-period certificate", joint_period},
      {"moment submultiplicativity", moments},
      {"a.e.-constancy", constancy},
      {"exterior-power algebra", exterior},
  };
  int failed = 0, i = 0;
  for (const auto& [name, f] : criteria) {
    ++i;
    Outcome o{false, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %-28s %s  %s  [%.2f s]\n", i, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
