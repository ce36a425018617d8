#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvc/big_real.hpp"
#include "pvc/zbeta.hpp"

namespace pvc {

using BigInt = boost::multiprecision::cpp_int;

/// A Pisot-Vijayaraghavan number: real algebraic integer beta > 1 whose
/// other conjugates all lie strictly inside the unit disc.
///
/// The minimal polynomial is stored leading coefficient first, so
/// {1, -1, -1} is x^2 - x - 1. Construct through make_pisot(), which
/// validates the PV property.
class PisotNumber {
 public:
  const std::vector<std::int64_t>& minpoly() const { return minpoly_; }
  /// a_1..a_r in x^r = a_1 x^{r-1} + ... + a_r.
  const std::vector<std::int64_t>& recurrence() const { return recurrence_; }
  double beta() const { return static_cast<double>(beta_); }
  long double beta_ld() const { return beta_; }
  const std::vector<std::complex<long double>>& conjugates() const { return conjugates_; }
  double rho() const { return rho_; }
  int degree() const { return static_cast<int>(recurrence_.size()); }
  int floor_beta() const { return floor_beta_; }
  bool is_integer() const { return degree() == 1; }

  /// beta to `bits` bits, by Newton iteration on the minimal polynomial.
  BigReal beta_big(mpfr_prec_t bits) const;
  const ZBetaRing& ring() const { return *ring_; }

  /// "1,-1,-1" style coefficient list.
  std::string to_text() const;

 private:
  friend PisotNumber make_pisot(std::span<const std::int64_t> minpoly);

  std::vector<std::int64_t> minpoly_;
  std::vector<std::int64_t> recurrence_;
  long double beta_ = 0;
  std::vector<std::complex<long double>> conjugates_;
  double rho_ = 0;
  int floor_beta_ = 0;
  std::shared_ptr<const ZBetaRing> ring_;
};

PisotNumber make_pisot(std::span<const std::int64_t> minpoly);
PisotNumber make_pisot(std::initializer_list<std::int64_t> minpoly);
PisotNumber parse_pisot(std::string_view text);

/// F_n = beta^n + sum of conjugates^n, exact.
BigInt trace_power(const PisotNumber& p, int n);
/// F_1..F_n_max.
std::vector<BigInt> trace_powers(const PisotNumber& p, int n_max);
/// |beta^n - F_n| evaluated with enough working precision to be exact to
/// double rounding.
double pv_defect(const PisotNumber& p, int n);

struct BetaDigits {
  std::vector<int> digits;
  auto operator<=>(const BetaDigits&) const = default;
};

/// Greedy (Renyi) expansion of x in [0,1) to n digits, in extended precision.
BetaDigits beta_expand(const PisotNumber& p, double x, int n);
/// Greedy expansion of the rational num/den, carried out exactly in Q(beta).
BetaDigits beta_expand_exact(const PisotNumber& p, std::int64_t num, std::int64_t den, int n);
/// sum eps_k beta^{-k}
long double digits_value(const PisotNumber& p, const BetaDigits& d);
bool is_admissible(const PisotNumber& p, const BetaDigits& d);

/// The set of x in [0,1) whose expansion starts with `digits`.
struct BetaInterval {
  long double left = 0;
  long double right = 0;
  int level = 0;
  BetaDigits digits;
  /// beta^level * (right - left), exact.
  ZBeta scaled_length;

  long double length() const { return right - left; }
};

BetaInterval beta_interval(const PisotNumber& p, const BetaDigits& digits);
/// All level-n intervals in increasing order.
std::vector<BetaInterval> enumerate_beta_intervals(const PisotNumber& p, int level);
/// Smallest C with C^{-1} beta^{-n} <= |I| <= C beta^{-n} over all levels 1..max_level.
double measure_interval_constant(const PisotNumber& p, int max_level);

struct LatticePoint {
  std::vector<int> eta;  // tau = sum eta_i beta^i
  ZBeta exact;
  long double value = 0;
};

/// tau = eta_m beta^m + ... + eta_0 with 0 <= eta_i <= floor(beta), deduplicated
/// and sorted. Above `cap` digit vectors a uniform sample of `cap` vectors is drawn.
std::vector<LatticePoint> translation_lattice(const PisotNumber& p, int m,
                                              std::size_t cap = 1'000'000,
                                              std::uint64_t seed = 0x5eed);

/// High-precision value of a lattice point.
BigReal lattice_value_big(const PisotNumber& p, const LatticePoint& tau, mpfr_prec_t bits);

double distance_to_integers(double y);

/// dist(beta^k tau, Z), computed from the conjugate embeddings of tau
/// (trace integrality), so it stays accurate when beta^k tau is huge.
double lattice_decay_distance(const PisotNumber& p, const LatticePoint& tau, int k);

/// max over the lattice and 1 <= k <= k_max of dist(beta^k tau, Z) / rho^k.
double measure_lattice_constant(const PisotNumber& p, std::span<const LatticePoint> lattice,
                                int k_max);
/// floor(beta) (r-1) / (1 - rho): the trace-identity upper bound for that ratio.
double lattice_constant_bound(const PisotNumber& p);

}  // namespace pvc
