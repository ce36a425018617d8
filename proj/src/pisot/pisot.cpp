#include "pvc/pisot.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "pvc/error.hpp"

namespace pvc {
namespace {

using cld = std::complex<long double>;

// p(z) for the leading-first coefficient list.
cld eval_poly(std::span<const std::int64_t> c, cld z) {
  cld s = 0;
  for (auto v : c) s = s * z + static_cast<long double>(v);
  return s;
}

cld eval_poly_derivative(std::span<const std::int64_t> c, cld z) {
  const std::size_t r = c.size() - 1;
  cld s = 0;
  for (std::size_t i = 0; i < r; ++i) s = s * z + static_cast<long double>(c[i]) * static_cast<long double>(r - i);
  return s;
}

std::vector<cld> polynomial_roots(std::span<const std::int64_t> c) {
  const int r = static_cast<int>(c.size()) - 1;
  if (r == 1) return {cld(-static_cast<long double>(c[1]), 0)};

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < r; ++j) comp(0, j) = -static_cast<double>(c[j + 1]);
  for (int i = 1; i < r; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<cld> roots;
  for (int i = 0; i < r; ++i) {
    cld z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    for (int it = 0; it < 60; ++it) {
      const cld d = eval_poly_derivative(c, z);
      if (std::abs(d) == 0) break;
      const cld step = eval_poly(c, z) / d;
      z -= step;
      if (std::abs(step) <= 1e-19L * std::max<long double>(1, std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

__extension__ typedef __int128 i128;

bool has_integer_root(std::span<const std::int64_t> c, const std::vector<cld>& roots) {
  for (const auto& z : roots) {
    if (std::fabs(z.imag()) > 1e-6L) continue;
    const long double k = std::round(z.real());
    if (std::fabs(z.real() - k) > 1e-6L) continue;
    i128 s = 0;
    const i128 kk = static_cast<i128>(k);
    for (auto v : c) s = s * kk + v;
    if (s == 0) return true;
  }
  return false;
}

// Exact test that x^2 - s x + t divides c (integer long division).
bool divides_quadratic(std::span<const std::int64_t> c, std::int64_t s, std::int64_t t) {
  std::vector<i128> rem(c.begin(), c.end());
  const std::size_t n = rem.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const i128 q = rem[i];
    rem[i + 1] += q * s;
    rem[i + 2] -= q * t;
  }
  return rem[n - 2] == 0 && rem[n - 1] == 0;
}

bool has_quadratic_factor(std::span<const std::int64_t> c, const std::vector<cld>& roots) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      const cld s = roots[i] + roots[j];
      const cld t = roots[i] * roots[j];
      if (std::fabs(s.imag()) > 1e-6L || std::fabs(t.imag()) > 1e-6L) continue;
      const long double sr = std::round(s.real()), tr = std::round(t.real());
      if (std::fabs(s.real() - sr) > 1e-6L || std::fabs(t.real() - tr) > 1e-6L) continue;
      if (divides_quadratic(c, static_cast<std::int64_t>(sr), static_cast<std::int64_t>(tr))) return true;
    }
  }
  return false;
}

}  // namespace

PisotNumber make_pisot(std::initializer_list<std::int64_t> minpoly) {
  return make_pisot(std::span<const std::int64_t>(minpoly.begin(), minpoly.size()));
}

PisotNumber make_pisot(std::span<const std::int64_t> minpoly) {
  require(minpoly.size() >= 2, ErrorCode::InvalidArgument, "minimal polynomial needs degree >= 1");
  require(minpoly[0] == 1, ErrorCode::InvalidArgument, "minimal polynomial must be monic");
  for (auto v : minpoly)
    require(v > -(1LL << 40) && v < (1LL << 40), ErrorCode::InvalidArgument,
            "coefficient magnitude out of supported range");

  const auto roots = polynomial_roots(minpoly);
  const int r = static_cast<int>(minpoly.size()) - 1;

  // Irreducibility: complete for degree <= 4 (integer roots, quadratic
  // factors); beyond that only those two factor shapes are detected.
  if (r >= 2) {
    require(!has_integer_root(minpoly, roots), ErrorCode::ReduciblePolynomial,
            "polynomial has an integer root");
    if (r >= 4)
      require(!has_quadratic_factor(minpoly, roots), ErrorCode::ReduciblePolynomial,
              "polynomial has an integer quadratic factor");
  }

  std::size_t best = roots.size();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (std::fabs(roots[i].imag()) > 1e-9L * std::max<long double>(1, std::abs(roots[i]))) continue;
    if (best == roots.size() || roots[i].real() > roots[best].real()) best = i;
  }
  require(best != roots.size() && roots[best].real() > 1, ErrorCode::NoRealRootAboveOne,
          "no real root greater than one");

  PisotNumber p;
  p.minpoly_.assign(minpoly.begin(), minpoly.end());
  p.recurrence_.resize(r);
  for (int i = 0; i < r; ++i) p.recurrence_[i] = -minpoly[i + 1];
  p.beta_ = roots[best].real();
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (i != best) p.conjugates_.push_back(roots[i]);
  for (const auto& z : p.conjugates_) p.rho_ = std::max(p.rho_, static_cast<double>(std::abs(z)));
  require(p.rho_ < 1.0 - 1e-12, ErrorCode::NotPisot,
          "conjugate of modulus " + std::to_string(p.rho_) + " >= 1");

  long double scale = 0;
  for (std::size_t i = 0; i < minpoly.size(); ++i)
    scale += std::fabs(static_cast<long double>(minpoly[i])) * std::pow(p.beta_, static_cast<long double>(r - i));
  const long double resid = std::abs(eval_poly(minpoly, cld(p.beta_, 0)));
  require(resid <= 16.0L * r * 1e-18L * scale, ErrorCode::InvalidArgument,
          "root polishing failed to converge");

  p.floor_beta_ = static_cast<int>(std::floor(p.beta_ + 1e-15L));
  if (p.is_integer()) p.floor_beta_ = static_cast<int>(p.recurrence_[0]);
  p.ring_ = std::make_shared<ZBetaRing>(p.recurrence_, p.beta_big(256));
  return p;
}

PisotNumber parse_pisot(std::string_view text) {
  std::vector<std::int64_t> coeffs;
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  long long v;
  while (in >> v) coeffs.push_back(v);
  require(in.eof(), ErrorCode::InvalidArgument, "cannot parse coefficient list '" + std::string(text) + "'");
  return make_pisot(coeffs);
}

std::string PisotNumber::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < minpoly_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(minpoly_[i]);
  }
  return out;
}

BigReal PisotNumber::beta_big(mpfr_prec_t bits) const {
  if (is_integer()) return BigReal(static_cast<double>(recurrence_[0]), bits);
  const mpfr_prec_t work = bits + 32;
  BigReal z(static_cast<double>(beta_), work);
  // Newton doubles the correct bits per step; start from ~60 bits.
  for (mpfr_prec_t have = 50; have < 2 * work; have *= 2) {
    BigReal f(0.0, work), df(0.0, work);
    const int r = degree();
    for (int i = 0; i <= r; ++i) {
      df *= z;
      df += f;
      f *= z;
      f.add_si(static_cast<long>(minpoly_[i]));
    }
    f /= df;
    z -= f;
  }
  z.round_to(bits);
  return z;
}

std::vector<BigInt> trace_powers(const PisotNumber& p, int n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "trace_power requires n >= 1");
  const auto& a = p.recurrence();
  const int r = p.degree();
  std::vector<BigInt> s(static_cast<std::size_t>(n_max) + 1);
  for (int k = 1; k <= n_max; ++k) {
    BigInt acc = 0;
    for (int i = 1; i <= std::min(k - 1, r); ++i) acc += BigInt(a[i - 1]) * s[k - i];
    if (k <= r) acc += BigInt(k) * BigInt(a[k - 1]);  // Newton's identity seed
    s[k] = acc;
  }
  return {s.begin() + 1, s.end()};
}

BigInt trace_power(const PisotNumber& p, int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "trace_power requires n >= 1");
  return trace_powers(p, n).back();
}

double pv_defect(const PisotNumber& p, int n) {
  const auto bits = static_cast<mpfr_prec_t>(160 + n * std::ceil(std::log2(p.beta()) + 1));
  BigReal b = p.beta_big(bits);
  BigReal bn(0.0, bits);
  mpfr_pow_ui(bn.raw(), b.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
  BigReal fn(0.0, bits);
  mpfr_set_str(fn.raw(), trace_power(p, n).str().c_str(), 10, MPFR_RNDN);
  bn -= fn;
  return std::fabs(bn.to_double());
}

BetaDigits beta_expand(const PisotNumber& p, double x, int n) {
  require(x >= 0 && x < 1, ErrorCode::InvalidArgument, "beta_expand needs x in [0,1)");
  require(n >= 1, ErrorCode::InvalidArgument, "beta_expand needs n >= 1");
  BetaDigits out;
  long double y = x;
  const long double b = p.beta_ld();
  for (int k = 0; k < n; ++k) {
    const long double z = b * y;
    int e = static_cast<int>(std::floor(z));
    e = std::clamp(e, 0, p.floor_beta());
    out.digits.push_back(e);
    y = std::max<long double>(0, z - e);
  }
  return out;
}

BetaDigits beta_expand_exact(const PisotNumber& p, std::int64_t num, std::int64_t den, int n) {
  require(den > 0 && num >= 0 && num < den, ErrorCode::InvalidArgument,
          "beta_expand_exact needs 0 <= num/den < 1");
  require(n >= 1, ErrorCode::InvalidArgument, "beta_expand needs n >= 1");
  const auto& ring = p.ring();
  // state: den * x_k as an element of Z[beta]
  ZBeta state = ring.from_int(num);
  BetaDigits out;
  for (int k = 0; k < n; ++k) {
    const ZBeta scaled = ring.mul_beta(state);
    auto digit = static_cast<std::int64_t>(std::floor(ring.value(scaled) / static_cast<long double>(den)));
    digit = std::clamp<std::int64_t>(digit, 0, p.floor_beta());
    while (digit > 0 && ring.sign(ring.add_int(scaled, -digit * den)) < 0) --digit;
    while (digit < p.floor_beta() && ring.sign(ring.add_int(scaled, -(digit + 1) * den)) >= 0) ++digit;
    state = ring.add_int(scaled, -digit * den);
    out.digits.push_back(static_cast<int>(digit));
  }
  return out;
}

long double digits_value(const PisotNumber& p, const BetaDigits& d) {
  long double s = 0;
  for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) s = (s + *it) / p.beta_ld();
  return s;
}

namespace {

// Walks the beta-shift: `gap` = beta^k |I(eps_1..eps_k)|, starting at 1.
// A digit e is admissible iff e < beta * gap, and then gap <- min(beta*gap - e, 1).
bool advance_gap(const PisotNumber& p, ZBeta& gap, int e) {
  const auto& ring = p.ring();
  if (e < 0 || e > p.floor_beta()) return false;
  ZBeta next = ring.add_int(ring.mul_beta(gap), -e);
  if (ring.sign(next) <= 0) return false;
  const ZBeta one = ring.from_int(1);
  if (ring.compare(next, one) > 0) next = one;
  gap = std::move(next);
  return true;
}

}  // namespace

bool is_admissible(const PisotNumber& p, const BetaDigits& d) {
  ZBeta gap = p.ring().from_int(1);
  for (int e : d.digits)
    if (!advance_gap(p, gap, e)) return false;
  return true;
}

BetaInterval beta_interval(const PisotNumber& p, const BetaDigits& digits) {
  ZBeta gap = p.ring().from_int(1);
  for (int e : digits.digits)
    require(advance_gap(p, gap, e), ErrorCode::InadmissibleDigits, "digit string is not greedy-admissible");
  BetaInterval out;
  out.level = static_cast<int>(digits.digits.size());
  out.digits = digits;
  out.left = digits_value(p, digits);
  out.right = out.left + p.ring().value(gap) / std::pow(p.beta_ld(), static_cast<long double>(out.level));
  out.scaled_length = std::move(gap);
  return out;
}

std::vector<BetaInterval> enumerate_beta_intervals(const PisotNumber& p, int level) {
  require(level >= 1, ErrorCode::InvalidArgument, "level must be >= 1");
  std::vector<BetaInterval> out;
  const long double scale = std::pow(p.beta_ld(), static_cast<long double>(level));
  std::vector<int> prefix;

  // depth-first in lexicographic digit order, which is also numeric order
  auto recurse = [&](auto&& self, const ZBeta& gap, long double left, long double weight) -> void {
    if (static_cast<int>(prefix.size()) == level) {
      BetaInterval iv;
      iv.level = level;
      iv.digits.digits = prefix;
      iv.left = left;
      iv.right = left + p.ring().value(gap) / scale;
      iv.scaled_length = gap;
      out.push_back(std::move(iv));
      return;
    }
    for (int e = 0; e <= p.floor_beta(); ++e) {
      ZBeta next = gap;
      if (!advance_gap(p, next, e)) break;
      prefix.push_back(e);
      self(self, next, left + e * weight, weight / p.beta_ld());
      prefix.pop_back();
    }
  };
  recurse(recurse, p.ring().from_int(1), 0.0L, 1.0L / p.beta_ld());
  return out;
}

double measure_interval_constant(const PisotNumber& p, int max_level) {
  double c = 1.0;
  for (int n = 1; n <= max_level; ++n) {
    for (const auto& iv : enumerate_beta_intervals(p, n)) {
      const double g = static_cast<double>(p.ring().value(iv.scaled_length));
      c = std::max({c, g, 1.0 / g});
    }
  }
  return c;
}

std::vector<LatticePoint> translation_lattice(const PisotNumber& p, int m, std::size_t cap,
                                              std::uint64_t seed) {
  require(m >= 0, ErrorCode::InvalidArgument, "lattice level must be >= 0");
  const auto& ring = p.ring();
  const int base = p.floor_beta() + 1;
  std::vector<ZBeta> powers;
  for (int i = 0; i <= m; ++i) powers.push_back(ring.beta_power(i));

  std::map<ZBeta, LatticePoint> unique;
  auto insert = [&](const std::vector<int>& eta) {
    ZBeta z = ring.from_int(0);
    for (int i = 0; i <= m; ++i)
      if (eta[i]) z = ring.add(z, ring.scale(powers[i], eta[i]));
    if (unique.count(z)) return;
    LatticePoint pt;
    pt.eta = eta;
    pt.value = ring.value(z);
    pt.exact = z;
    unique.emplace(std::move(z), std::move(pt));
  };

  const long double total = std::pow(static_cast<long double>(base), static_cast<long double>(m + 1));
  std::vector<int> eta(static_cast<std::size_t>(m) + 1, 0);
  if (total <= static_cast<long double>(cap)) {
    while (true) {
      insert(eta);
      int i = 0;
      while (i <= m && ++eta[i] == base) eta[i++] = 0;
      if (i > m) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> digit(0, base - 1);
    for (std::size_t s = 0; s < cap; ++s) {
      for (auto& e : eta) e = digit(rng);
      insert(eta);
    }
  }

  std::vector<LatticePoint> out;
  out.reserve(unique.size());
  for (auto& [k, v] : unique) out.push_back(std::move(v));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

BigReal lattice_value_big(const PisotNumber& p, const LatticePoint& tau, mpfr_prec_t bits) {
  return p.ring().value_big(tau.exact, bits);
}

double distance_to_integers(double y) { return std::fabs(y - std::nearbyint(y)); }

double lattice_decay_distance(const PisotNumber& p, const LatticePoint& tau, int k) {
  // beta^k tau + sum_j sigma_j(beta^k tau) is a rational integer.
  long double conj_sum = 0;
  for (const auto& z : p.conjugates()) {
    cld acc = 0;
    cld zk = std::pow(z, k);
    for (std::size_t i = 0; i < tau.eta.size(); ++i) {
      acc += static_cast<long double>(tau.eta[i]) * zk;
      zk *= z;
    }
    conj_sum += acc.real();
  }
  return static_cast<double>(std::fabs(conj_sum - std::nearbyint(conj_sum)));
}

double measure_lattice_constant(const PisotNumber& p, std::span<const LatticePoint> lattice, int k_max) {
  if (p.rho() == 0) return 0;
  double c = 0;
  for (const auto& tau : lattice)
    for (int k = 1; k <= k_max; ++k)
      c = std::max(c, lattice_decay_distance(p, tau, k) / std::pow(p.rho(), k));
  return c;
}

double lattice_constant_bound(const PisotNumber& p) {
  return p.floor_beta() * (p.degree() - 1) / (1.0 - p.rho());
}

}  // namespace pvc
