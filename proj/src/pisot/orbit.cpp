#include "pvc/orbit.hpp"

#include <cmath>
#include <sstream>

#include "pvc/error.hpp"

namespace pvc {

ScalingBase::ScalingBase(PisotNumber p) : beta_(p.beta()), pisot_(std::move(p)) {}

ScalingBase ScalingBase::real(double beta) {
  require(std::isfinite(beta) && beta > 1, ErrorCode::InvalidArgument, "scaling base must be > 1");
  ScalingBase b;
  b.beta_ = beta;
  return b;
}

long double ScalingBase::beta_ld() const { return pisot_ ? pisot_->beta_ld() : beta_; }

const PisotNumber& ScalingBase::pisot() const {
  require(pisot_.has_value(), ErrorCode::InvalidArgument, "operation requires a Pisot base");
  return *pisot_;
}

BigReal ScalingBase::beta_big(mpfr_prec_t bits) const {
  return pisot_ ? pisot_->beta_big(bits) : BigReal(beta_, bits);
}

bool ScalingBase::is_integer() const {
  return pisot_ ? pisot_->is_integer() : (beta_ == std::floor(beta_));
}

std::string ScalingBase::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (pisot_)
    os << "pisot[" << pisot_->to_text() << "] beta=" << beta_;
  else
    os << "real beta=" << beta_;
  return os.str();
}

double Period::value() const { return two_pi ? scale * 2.0 * M_PI : scale; }

BigReal Period::value_big(mpfr_prec_t bits) const {
  BigReal v(scale, bits);
  if (two_pi) {
    BigReal pi(bits);
    mpfr_const_pi(pi.raw(), MPFR_RNDN);
    pi.mul_si(2);
    v *= pi;
  }
  return v;
}

mpfr_prec_t orbit_precision(const ScalingBase& base, double x_magnitude, std::size_t count) {
  const double growth = static_cast<double>(count) * std::log2(base.beta());
  const double lead = std::log2(std::fabs(x_magnitude) + 2.0);
  return static_cast<mpfr_prec_t>(std::ceil(growth + lead + std::log2(static_cast<double>(count) + 2)) + 96);
}

std::vector<double> orbit_phases(const ScalingBase& base, const BigReal& x, const Period& period,
                                 std::size_t count) {
  const mpfr_prec_t bits = std::max(x.precision(), orbit_precision(base, x.to_double(), count));
  BigReal z = x;
  z.round_to(bits);
  if (!(period.scale == 1.0 && !period.two_pi)) z /= period.value_big(bits);

  std::vector<double> out(count);
  if (base.is_integer()) {
    // beta * frac(z) == beta * z (mod 1) for integral beta
    const auto b = static_cast<long>(base.beta());
    z = z.frac_positive();
    for (std::size_t k = 0; k < count; ++k) {
      out[k] = z.to_double();
      if (out[k] >= 1.0) out[k] = 0.0;
      z.mul_si(b);
      z = z.frac_positive();
    }
    return out;
  }

  const BigReal beta = base.beta_big(bits);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = z.frac_positive().to_double();
    if (out[k] >= 1.0) out[k] = 0.0;
    z *= beta;
  }
  return out;
}

std::vector<double> orbit_phases(const ScalingBase& base, double x, const Period& period,
                                 std::size_t count) {
  return orbit_phases(base, BigReal(x, 64), period, count);
}

std::vector<BigReal> stratified_points(std::mt19937_64& rng, const ScalingBase& base, double lo,
                                       double hi, std::size_t count, std::size_t orbit_len) {
  require(hi > lo && count >= 1, ErrorCode::InvalidArgument, "empty sampling window");
  const mpfr_prec_t bits = orbit_precision(base, std::max(std::fabs(lo), std::fabs(hi)), orbit_len);
  std::vector<BigReal> out;
  out.reserve(count);
  const double width = (hi - lo) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = lo + width * static_cast<double>(i);
    out.push_back(BigReal::uniform(rng, a, a + width, bits));
  }
  return out;
}

BigReal times_beta(const ScalingBase& base, const BigReal& x) {
  BigReal out = x;
  out *= base.beta_big(x.precision());
  return out;
}

BigReal divide_beta_power(const ScalingBase& base, const BigReal& x, int k) {
  BigReal out = x;
  const BigReal b = base.beta_big(x.precision());
  for (int i = 0; i < k; ++i) out /= b;
  return out;
}

}  // namespace pvc
