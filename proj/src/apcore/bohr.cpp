#include "pvc/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pvc/error.hpp"
#include "pvc/kernels.hpp"

namespace pvc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;
constexpr std::size_t kBlock = 4096;

std::vector<double> grid_points(const GridSpec& g, std::size_t from, std::size_t to) {
  std::vector<double> xs(to - from);
  const double h = g.length / static_cast<double>(g.points);
  for (std::size_t i = from; i < to; ++i) xs[i - from] = g.start + h * static_cast<double>(i);
  return xs;
}

}  // namespace

double empirical_bohr_mean(const RealFunction& f, double T, std::size_t n_samples) {
  require(T > 0 && std::isfinite(T), ErrorCode::InvalidArgument, "T must be positive");
  require(n_samples >= 2, ErrorCode::InvalidArgument, "need at least 2 samples");
  const double h = T / static_cast<double>(n_samples);
  // Neumaier summation keeps 1e7-term sums exact to rounding
  double s = 0, c = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double v = f(h * (static_cast<double>(i) + 0.5));
    const double t = s + v;
    c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return (s + c) / static_cast<double>(n_samples);
}

BohrLadder bohr_mean_ladder(const RealFunction& f, double T0, double ratio, std::size_t steps,
                            double samples_per_unit) {
  require(T0 > 0 && ratio > 1 && steps >= 1 && samples_per_unit > 0, ErrorCode::InvalidArgument,
          "bad Bohr ladder parameters");
  BohrLadder out;
  double T = T0;
  double best = -INFINITY;
  for (std::size_t k = 0; k < steps; ++k, T *= ratio) {
    const auto n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(T * samples_per_unit)));
    const double a = empirical_bohr_mean(f, T, n);
    best = std::max(best, a);
    out.T.push_back(T);
    out.averages.push_back(a);
    out.running_max.push_back(best);
  }
  return out;
}

GridSpec default_grid(const TrigPolynomial& f, double tau) {
  double window = 10.0;
  try {
    const TrigPolynomial fam[] = {f};
    window = 10.0 * common_period(fam).value();
  } catch (const Error&) {
    // incommensurate: use the slowest oscillation as the gap scale
    double slowest = 0;
    for (const auto& t : f.terms())
      if (t.freq != 0.0) slowest = slowest == 0 ? std::fabs(t.freq) : std::min(slowest, std::fabs(t.freq));
    window = 10.0 * kTwoPi / slowest;
  }
  window = std::max({window, 10.0 * std::fabs(tau), 1.0});
  // 32 points per shortest wavelength
  const double wmax = std::max(f.max_frequency(), 1e-9);
  const double per_unit = 32.0 * wmax / kTwoPi;
  const auto pts = static_cast<std::size_t>(std::ceil(window * per_unit));
  return GridSpec{0.0, window, std::clamp<std::size_t>(pts, 1000, 20'000'000)};
}

EpsilonPeriodReport epsilon_period_check(const TrigPolynomial& f, double tau, const GridSpec& grid) {
  require(grid.points >= 1000, ErrorCode::InvalidArgument, "grid needs at least 1000 points");
  require(grid.length > 0, ErrorCode::InvalidArgument, "grid window must be positive");
  // f(x + tau) - f(x) = sum A_n (e^{i L tau} - 1) e^{i L x}
  std::vector<TrigTerm> diff;
  for (const auto& t : f.terms()) diff.push_back({t.freq, t.coeff * (std::polar(1.0, t.freq * tau) - 1.0)});
  std::vector<double> freqs;
  std::vector<cplx> coeffs;
  for (const auto& t : diff) {
    freqs.push_back(t.freq);
    coeffs.push_back(t.coeff);
  }
  double eps = 0;
  std::vector<cplx> vals;
  std::vector<cplx> zeros(kBlock);
  for (std::size_t from = 0; from < grid.points; from += kBlock) {
    const std::size_t to = std::min(grid.points, from + kBlock);
    const auto xs = grid_points(grid, from, to);
    vals.resize(xs.size());
    kernels::eval_trig(freqs, coeffs, xs, vals);
    eps = std::max(eps, kernels::max_abs_diff(vals, std::span<const cplx>(zeros).first(vals.size())));
  }
  return {tau, eps, 0, grid.points};
}

EpsilonPeriodReport epsilon_period_check(const std::function<cplx(double)>& f, double tau,
                                         const GridSpec& grid) {
  require(grid.points >= 1000, ErrorCode::InvalidArgument, "grid needs at least 1000 points");
  double eps = 0;
  const double h = grid.length / static_cast<double>(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.start + h * static_cast<double>(i);
    eps = std::max(eps, std::abs(f(x + tau) - f(x)));
  }
  return {tau, eps, 0, grid.points};
}

double translation_bound(const TrigPolynomial& f, double tau) {
  double s = 0;
  for (const auto& t : f.terms()) s += 2.0 * std::abs(t.coeff) * std::fabs(std::sin(0.5 * t.freq * tau));
  return s;
}

NearPeriod near_period_search(const TrigPolynomial& f, double tau_min, double tau_max, double step) {
  require(tau_max > tau_min && step > 0, ErrorCode::InvalidArgument, "bad search range");
  NearPeriod best{tau_min, translation_bound(f, tau_min)};
  const auto n = static_cast<std::size_t>(std::ceil((tau_max - tau_min) / step));
  for (std::size_t i = 1; i <= n; ++i) {
    const double tau = std::min(tau_max, tau_min + step * static_cast<double>(i));
    const double b = translation_bound(f, tau);
    if (b < best.bound) best = {tau, b};
  }
  // golden-section refinement on [tau - step, tau + step]
  double a = std::max(tau_min, best.tau - step), b = std::min(tau_max, best.tau + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(best.tau)); ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (translation_bound(f, c) < translation_bound(f, d))
      b = d;
    else
      a = c;
  }
  const double mid = 0.5 * (a + b);
  if (const double v = translation_bound(f, mid); v < best.bound) best = {mid, v};
  return best;
}

double weyl_equidistribution_defect(const ScalingBase& base, const BigReal& x, double modulus,
                                    std::size_t N, std::size_t h_max) {
  require(modulus > 0 && std::isfinite(modulus), ErrorCode::InvalidArgument, "modulus must be positive");
  require(N >= 1 && h_max >= 1, ErrorCode::InvalidArgument, "N and h_max must be positive");
  const auto u = orbit_phases(base, x, Period{modulus, false}, N);
  std::vector<cplx> sums(h_max);
  kernels::weyl_sums(u, sums);
  double d = 0;
  for (const auto& s : sums) d = std::max(d, std::abs(s) / static_cast<double>(N));
  return std::min(d, 1.0);
}

double weyl_equidistribution_defect(const ScalingBase& base, double x, double modulus, std::size_t N,
                                    std::size_t h_max) {
  return weyl_equidistribution_defect(base, BigReal(x, 64), modulus, N, h_max);
}

WeylSample weyl_defect_random(const ScalingBase& base, std::uint64_t seed, double lo, double hi,
                              double modulus, std::size_t N, std::size_t h_max) {
  require(hi > lo, ErrorCode::InvalidArgument, "empty sampling window");
  std::mt19937_64 rng(seed);
  const mpfr_prec_t bits = orbit_precision(base, std::max(std::fabs(lo), std::fabs(hi)) / modulus, N);
  BigReal x = BigReal::uniform(rng, lo, hi, bits);
  const double d = weyl_equidistribution_defect(base, x, modulus, N, h_max);
  return {std::move(x), d};
}

}  // namespace pvc
