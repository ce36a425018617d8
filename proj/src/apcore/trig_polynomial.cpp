#include "pvc/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "pvc/error.hpp"
#include "pvc/kernels.hpp"

namespace pvc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925;

bool same_freq(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)); }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  require(end != tok.c_str() && *end == '\0', ErrorCode::InvalidArgument, "bad number '" + tok + "'");
  return v;
}

// number, "2pi", "2pi*k" or "k*2pi"
double parse_frequency(const std::string& tok) {
  const auto pos = tok.find("2pi");
  if (pos == std::string::npos) return parse_number(tok);
  // sign * 2pi * k, written as 2pi, -2pi*3, 2pi*-3, 3*2pi ...
  std::string before = trim(tok.substr(0, pos));
  std::string after = trim(tok.substr(pos + 3));
  double sign = 1;
  if (!before.empty() && (before.front() == '-' || before.front() == '+')) {
    if (before.front() == '-') sign = -1;
    before = trim(before.substr(1));
  }
  if (!before.empty() && before.back() == '*') before = trim(before.substr(0, before.size() - 1));
  if (!after.empty() && after.front() == '*') after = trim(after.substr(1));
  require(before.empty() || after.empty(), ErrorCode::InvalidArgument, "bad frequency '" + tok + "'");
  const std::string k = before.empty() ? after : before;
  if (k.empty()) return sign * kTwoPi;
  if (k == "-") return -sign * kTwoPi;
  return sign * kTwoPi * parse_number(k);
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<TrigTerm> terms) {
  for (const auto& t : terms)
    require(std::isfinite(t.freq) && std::isfinite(t.coeff.real()) && std::isfinite(t.coeff.imag()),
            ErrorCode::InvalidArgument, "non-finite trigonometric term");
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.freq < b.freq; });
  for (const auto& t : terms) {
    if (!terms_.empty() && same_freq(terms_.back().freq, t.freq))
      terms_.back().coeff += t.coeff;
    else
      terms_.push_back(t);
  }
  for (auto& t : terms_)
    if (std::fabs(t.freq) <= 1e-12) t.freq = 0.0;
}

TrigPolynomial TrigPolynomial::constant(cplx c) { return TrigPolynomial({{0.0, c}}); }

TrigPolynomial TrigPolynomial::exponential(double freq, cplx coeff) { return TrigPolynomial({{freq, coeff}}); }

TrigPolynomial TrigPolynomial::cosine(double freq, double a) {
  return TrigPolynomial({{freq, cplx(a / 2, 0)}, {-freq, cplx(a / 2, 0)}});
}

TrigPolynomial TrigPolynomial::sine(double freq, double a) {
  return TrigPolynomial({{freq, cplx(0, -a / 2)}, {-freq, cplx(0, a / 2)}});
}

cplx TrigPolynomial::operator()(double x) const {
  cplx s = 0;
  for (const auto& t : terms_) s += t.coeff * std::polar(1.0, t.freq * x);
  return s;
}

void TrigPolynomial::evaluate(std::span<const double> xs, std::span<cplx> out) const {
  std::vector<double> freqs;
  std::vector<cplx> coeffs;
  freqs.reserve(terms_.size());
  coeffs.reserve(terms_.size());
  for (const auto& t : terms_) {
    freqs.push_back(t.freq);
    coeffs.push_back(t.coeff);
  }
  kernels::eval_trig(freqs, coeffs, xs, out);
}

bool TrigPolynomial::is_one_periodic(double tol) const {
  for (const auto& t : terms_) {
    const double k = t.freq / kTwoPi;
    if (std::fabs(k - std::nearbyint(k)) > tol * std::max(1.0, std::fabs(k))) return false;
  }
  return true;
}

bool TrigPolynomial::is_real_valued(double tol) const {
  for (const auto& t : terms_) {
    const auto it = std::find_if(terms_.begin(), terms_.end(),
                                 [&](const TrigTerm& o) { return same_freq(o.freq, -t.freq); });
    if (it == terms_.end()) {
      if (std::abs(t.coeff) > tol) return false;
      continue;
    }
    if (std::abs(it->coeff - std::conj(t.coeff)) > tol) return false;
  }
  return true;
}

bool TrigPolynomial::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const TrigTerm& t) { return t.freq == 0.0 || std::abs(t.coeff) == 0.0; });
}

TrigPolynomial TrigPolynomial::shifted(double c) const {
  std::vector<TrigTerm> out = terms_;
  for (auto& t : out) t.coeff *= std::polar(1.0, t.freq * c);
  return TrigPolynomial(std::move(out));
}

TrigPolynomial TrigPolynomial::derivative() const {
  std::vector<TrigTerm> out = terms_;
  for (auto& t : out) t.coeff *= cplx(0, t.freq);
  return TrigPolynomial(std::move(out));
}

double TrigPolynomial::coefficient_l1() const {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double TrigPolynomial::derivative_bound() const {
  double s = 0;
  for (const auto& t : terms_) s += std::fabs(t.freq) * std::abs(t.coeff);
  return s;
}

double TrigPolynomial::max_frequency() const {
  double m = 0;
  for (const auto& t : terms_) m = std::max(m, std::fabs(t.freq));
  return m;
}

std::vector<std::int64_t> TrigPolynomial::harmonics(const Period& period) const {
  std::vector<std::int64_t> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const double k = period.two_pi ? t.freq * period.scale : t.freq * period.scale / kTwoPi;
    const double r = std::nearbyint(k);
    require(std::fabs(k - r) <= 1e-9 * std::max(1.0, std::fabs(k)), ErrorCode::NoCommonPeriod,
            "frequency " + std::to_string(t.freq) + " is not a harmonic of the period");
    out.push_back(static_cast<std::int64_t>(r));
  }
  return out;
}

std::string TrigPolynomial::to_text() const {
  std::string out;
  char buf[128];
  for (const auto& t : terms_) {
    if (!out.empty()) out += ' ';
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", t.freq, t.coeff.real(), t.coeff.imag());
    out += buf;
  }
  return out.empty() ? "(0, 0, 0)" : out;
}

TrigPolynomial TrigPolynomial::parse(std::string_view text) {
  std::vector<TrigTerm> terms;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find('(', pos);
    if (open == std::string_view::npos) {
      require(trim(text.substr(pos)).find_first_not_of(", ") == std::string::npos,
              ErrorCode::InvalidArgument, "trailing text in trigonometric polynomial");
      break;
    }
    require(trim(text.substr(pos, open - pos)).find_first_not_of(", ") == std::string::npos,
            ErrorCode::InvalidArgument, "unexpected text before '('");
    const auto close = text.find(')', open);
    require(close != std::string_view::npos, ErrorCode::InvalidArgument, "unbalanced '(' in polynomial");
    const std::string body(text.substr(open + 1, close - open - 1));
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i == body.size() || body[i] == ',') {
        parts.push_back(trim(std::string_view(body).substr(start, i - start)));
        start = i + 1;
      }
    }
    require(parts.size() == 3, ErrorCode::InvalidArgument, "expected (freq, re, im) triple, got '(" + body + ")'");
    terms.push_back({parse_frequency(parts[0]), cplx(parse_number(parts[1]), parse_number(parts[2]))});
    pos = close + 1;
  }
  require(!terms.empty(), ErrorCode::InvalidArgument, "empty trigonometric polynomial");
  return TrigPolynomial(std::move(terms));
}

TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b) {
  std::vector<TrigTerm> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return TrigPolynomial(std::move(t));
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  std::vector<TrigTerm> t;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) t.push_back({x.freq + y.freq, x.coeff * y.coeff});
  return TrigPolynomial(std::move(t));
}

TrigPolynomial operator*(cplx s, const TrigPolynomial& a) {
  std::vector<TrigTerm> t = a.terms_;
  for (auto& x : t) x.coeff *= s;
  return TrigPolynomial(std::move(t));
}

cplx evaluate(const TrigPolynomial& f, double x) { return f(x); }

cplx bohr_mean_exact(const TrigPolynomial& f) {
  for (const auto& t : f.terms())
    if (t.freq == 0.0) return t.coeff;
  return 0;
}

Period common_period(std::span<const TrigPolynomial> family) {
  double omega = 0;
  for (const auto& f : family)
    for (const auto& t : f.terms())
      if (t.freq != 0.0 && std::abs(t.coeff) != 0.0)
        omega = omega == 0 ? std::fabs(t.freq) : std::min(omega, std::fabs(t.freq));
  if (omega == 0) return Period{};

  auto fits = [&](const Period& p) {
    try {
      for (const auto& f : family) (void)f.harmonics(p);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  for (const Period& p : {Period{1.0, false}, Period{1.0, true}, Period{1.0 / omega, true}})
    if (fits(p)) return p;
  throw Error(ErrorCode::NoCommonPeriod, "frequencies are not commensurate");
}

}  // namespace pvc
