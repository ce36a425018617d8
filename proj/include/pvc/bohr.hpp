#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pvc/big_real.hpp"
#include "pvc/orbit.hpp"
#include "pvc/trig_polynomial.hpp"

namespace pvc {

using RealFunction = std::function<double(double)>;

/// Composite-midpoint estimate of (1/T) int_0^T f(x) dx.
double empirical_bohr_mean(const RealFunction& f, double T, std::size_t n_samples);

/// Averages over T_k = T0 * ratio^k with their running maximum (the limsup
/// convention leaves the convergence decision to the caller).
struct BohrLadder {
  std::vector<double> T;
  std::vector<double> averages;
  std::vector<double> running_max;
};
BohrLadder bohr_mean_ladder(const RealFunction& f, double T0, double ratio, std::size_t steps,
                            double samples_per_unit);

/// Sampling window for sup-norm checks.
struct GridSpec {
  double start = 0;
  double length = 1;
  std::size_t points = 1000;
};

/// Grid certificate of a translation number: sup over the grid only.
struct EpsilonPeriodReport {
  double tau = 0;
  double epsilon_achieved = 0;
  std::int64_t n_min = 0;
  std::size_t grid_size = 0;
};

/// Window of >= 10 joint-period gaps (or >= 10 |tau|), spacing tied to the
/// largest frequency.
GridSpec default_grid(const TrigPolynomial& f, double tau);

EpsilonPeriodReport epsilon_period_check(const TrigPolynomial& f, double tau, const GridSpec& grid);
EpsilonPeriodReport epsilon_period_check(const std::function<cplx(double)>& f, double tau,
                                         const GridSpec& grid);

/// sum_n 2|A_n| |sin(Lambda_n tau / 2)|: the sup over R of |f(x+tau) - f(x)|
/// whenever the frequencies are rationally independent, and an upper bound
/// always.
double translation_bound(const TrigPolynomial& f, double tau);

/// Scan tau in [tau_min, tau_max] with the given step for the smallest
/// translation_bound, then refine locally.
struct NearPeriod {
  double tau = 0;
  double bound = 0;
};
NearPeriod near_period_search(const TrigPolynomial& f, double tau_min, double tau_max, double step);

/// max_{1<=h<=20} |(1/N) sum_{n<N} exp(2 pi i h beta^n x / modulus)|
double weyl_equidistribution_defect(const ScalingBase& base, const BigReal& x, double modulus,
                                    std::size_t N, std::size_t h_max = 20);
double weyl_equidistribution_defect(const ScalingBase& base, double x, double modulus, std::size_t N,
                                    std::size_t h_max = 20);

/// Random x in [lo, hi) drawn from `seed` with enough bits for an orbit of
/// length N; returns the point alongside the defect.
struct WeylSample {
  BigReal x;
  double defect;
};
WeylSample weyl_defect_random(const ScalingBase& base, std::uint64_t seed, double lo, double hi,
                              double modulus, std::size_t N, std::size_t h_max = 20);

}  // namespace pvc
