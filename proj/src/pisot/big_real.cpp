#include "pvc/big_real.hpp"

#include <gmp.h>

#include <cmath>
#include <vector>

namespace pvc {

std::string BigReal::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

BigReal BigReal::frac_positive() const {
  BigReal out(precision());
  mpfr_floor(out.v_, v_);
  mpfr_sub(out.v_, v_, out.v_, MPFR_RNDN);
  return out;
}

double BigReal::distance_to_integer() const {
  BigReal r(precision());
  mpfr_rint(r.v_, v_, MPFR_RNDN);
  mpfr_sub(r.v_, v_, r.v_, MPFR_RNDN);
  return std::fabs(r.to_double());
}

BigReal BigReal::uniform(std::mt19937_64& rng, double lo, double hi, mpfr_prec_t bits) {
  const std::size_t words = static_cast<std::size_t>((bits + 63) / 64);
  std::vector<std::uint64_t> limbs(words);
  for (auto& w : limbs) w = rng();

  mpz_t z;
  mpz_init(z);
  mpz_import(z, words, -1, sizeof(std::uint64_t), 0, 0, limbs.data());

  BigReal out(bits + 64);
  mpfr_set_z_2exp(out.v_, z, -static_cast<mpfr_exp_t>(64 * words), MPFR_RNDN);
  mpz_clear(z);

  BigReal width(hi - lo, bits + 64);
  out *= width;
  out += BigReal(lo, bits + 64);
  return out;
}

}  // namespace pvc
