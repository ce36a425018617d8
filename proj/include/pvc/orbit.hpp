#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pvc/big_real.hpp"
#include "pvc/pisot.hpp"

namespace pvc {

/// Scaling factor of a cocycle: a PisotNumber, or a plain real beta > 1
/// (taken as the exact value of the given double).
class ScalingBase {
 public:
  ScalingBase(PisotNumber p);  // NOLINT(google-explicit-constructor)
  static ScalingBase real(double beta);

  double beta() const { return beta_; }
  long double beta_ld() const;
  bool is_pisot() const { return pisot_.has_value(); }
  const PisotNumber& pisot() const;
  /// rho of the Pisot base; throws for a plain real base.
  double rho() const { return pisot().rho(); }
  BigReal beta_big(mpfr_prec_t bits) const;
  bool is_integer() const;
  std::string describe() const;

 private:
  ScalingBase() = default;
  double beta_ = 2;
  std::optional<PisotNumber> pisot_;
};

/// Common period of a family of entries: `scale`, times 2*pi when `two_pi`.
struct Period {
  double scale = 1.0;
  bool two_pi = false;

  double value() const;
  BigReal value_big(mpfr_prec_t bits) const;
  bool operator==(const Period&) const = default;
};

/// Working precision needed so that frac(beta^k x / period) is exact to
/// about 2^-64 for every k < count.
mpfr_prec_t orbit_precision(const ScalingBase& base, double x_magnitude, std::size_t count);

/// u_k = frac(beta^k x / period), k = 0..count-1, computed in `x`'s precision
/// raised to orbit_precision().
std::vector<double> orbit_phases(const ScalingBase& base, const BigReal& x, const Period& period,
                                 std::size_t count);
std::vector<double> orbit_phases(const ScalingBase& base, double x, const Period& period,
                                 std::size_t count);

/// x_i = lo + (i + U_i)(hi - lo)/count with U_i uniform, each point carrying
/// enough random bits for orbits of length `orbit_len`.
std::vector<BigReal> stratified_points(std::mt19937_64& rng, const ScalingBase& base, double lo,
                                       double hi, std::size_t count, std::size_t orbit_len);

/// beta * x at the precision of x.
BigReal times_beta(const ScalingBase& base, const BigReal& x);
/// x / beta^k at the precision of x.
BigReal divide_beta_power(const ScalingBase& base, const BigReal& x, int k);

}  // namespace pvc
