#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "pvc/certificate.hpp"
#include "pvc/cli.hpp"
#include "pvc/error.hpp"
#include "pvc/lyapunov.hpp"
#include "pvc/moments.hpp"
#include "pvc/oseledec.hpp"
#include "pvc/parallel.hpp"
#include "pvc/solver.hpp"

namespace pvc::cli {
namespace {

using json = nlohmann::ordered_json;

class Timer {
 public:
  Timer(RunReport& r, std::string step) : r_(r), step_(std::move(step)), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    r_.timings.emplace_back(step_, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count());
  }
  Timer(const Timer&) = delete;
  Timer& operator=(const Timer&) = delete;

 private:
  RunReport& r_;
  std::string step_;
  std::chrono::steady_clock::time_point t0_;
};

[[noreturn]] void missing(const ExperimentConfig& c, const std::string& block) {
  throw Error(ErrorCode::ConfigInvalid,
              block + ": required by command " + std::string(to_string(c.command)));
}

ScalingBase make_base(const ExperimentConfig& c) {
  if (c.base.real) return ScalingBase::real(*c.base.real);
  return make_pisot(c.base.minpoly);
}

BetaAdaptedMatrix make_matrix(const ExperimentConfig& c) {
  if (c.matrix.dim < 1) missing(c, "matrix");
  std::vector<MatrixEntry> e;
  for (const auto& s : c.matrix.entries) e.push_back({TrigPolynomial::parse(s.h), s.ell});
  MatrixOptions o;
  o.holder_alpha = c.matrix.holder_alpha;
  o.positivity_delta = c.matrix.positivity_delta;
  return BetaAdaptedMatrix(c.matrix.dim, std::move(e), make_base(c), o);
}

MultiperiodicEquation make_equation(const ExperimentConfig& c) {
  if (c.command == Command::Bernoulli)
    return bernoulli_convolution(c.bernoulli.p, c.bernoulli.a, c.bernoulli.b, make_base(c));
  if (c.equation.determining.empty()) missing(c, "equation");
  std::vector<TrigPolynomial> f;
  for (const auto& s : c.equation.determining) f.push_back(TrigPolynomial::parse(s));
  return MultiperiodicEquation(std::move(f), make_base(c));
}

EstimationSpec make_spec(const ExperimentConfig& c) {
  EstimationSpec s;
  s.ladder = c.estimation.ladder;
  s.samples = c.estimation.samples;
  s.window_lo = c.estimation.window_lo;
  s.window_hi = c.estimation.window_hi;
  s.seed = c.seed;
  s.threads = c.threads;
  s.cluster_tol = c.estimation.cluster_tol;
  return s;
}

json vec(const std::vector<double>& v) { return json(v); }

std::string describe(const JointPeriodCertificate& k) {
  std::ostringstream os;
  os.precision(6);
  os << (k.kind == CertificateKind::Contraction ? "contraction" : "positivity") << " q=" << k.q;
  if (k.D) os << " D=" << *k.D;
  if (k.delta) os << " delta=" << *k.delta;
  os << " D*rho^alpha=" << (k.D ? *k.D * k.rho_alpha : 0) << " script_C=" << k.script_C
     << " lattice_level=" << k.lattice_level;
  return os.str();
}

json certificate_json(const JointPeriodCertificate& k) {
  json j;
  j["kind"] = k.kind == CertificateKind::Contraction ? "contraction" : "positivity";
  j["q"] = k.q;
  if (k.D) j["D"] = *k.D;
  j["rho_alpha"] = k.rho_alpha;
  if (k.delta) j["delta"] = *k.delta;
  j["script_C"] = k.script_C;
  j["lattice_level"] = k.lattice_level;
  j["S"] = k.S;
  j["C_q"] = k.C_q;
  j["C_prime"] = k.C_prime;
  return j;
}

// Attempts a joint-period certificate; a Pisot base without one gets an "uncertified" warning.
std::optional<JointPeriodCertificate> try_certify(RunReport& r, const BetaAdaptedMatrix& M, int q) {
  if (!M.base().is_pisot()) {
    r.warnings.push_back("uncertified: base " + M.base().describe() + " is not a Pisot number");
    return std::nullopt;
  }
  Timer t(r, "certificate");
  try {
    CertificateOptions o;
    o.lattice_level = r.config.estimation.lattice_level;
    auto k = joint_period_certificate(M, q, o);
    r.certificates.push_back(describe(k));
    r.results["certificate"] = certificate_json(k);
    return k;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCertificate && e.code() != ErrorCode::UnboundedD) throw;
    r.warnings.push_back(std::string("uncertified: ") + e.what());
    r.results["certificate"] = nullptr;
    return std::nullopt;
  }
}

void cmd_pisot(RunReport& r) {
  const auto& c = r.config;
  if (c.base.real) throw Error(ErrorCode::ConfigInvalid, "base.minpoly: command pisot needs a minimal polynomial");
  const auto p = make_pisot(c.base.minpoly);
  r.results["minpoly"] = p.minpoly();
  r.results["beta"] = p.beta();
  r.results["beta_digits"] = p.beta_big(256).to_string(40);
  r.results["rho"] = p.rho();
  r.results["degree"] = p.degree();
  r.results["floor_beta"] = p.floor_beta();
  json conj = json::array();
  for (const auto& z : p.conjugates()) conj.push_back({static_cast<double>(z.real()), static_cast<double>(z.imag())});
  r.results["conjugates"] = conj;
  r.results["lattice_constant_bound"] = lattice_constant_bound(p);
  const int level = std::clamp(c.estimation.lattice_level, 1, 14);
  r.results["interval_constant_level"] = level;
  r.results["interval_constant"] = measure_interval_constant(p, level);

  Series s{"traces", {"n", "F_n", "pv_defect"}, {}};
  const int n = static_cast<int>(c.estimation.n);
  const auto F = trace_powers(p, n);
  for (int k = 1; k <= n; ++k) s.rows.push_back({k, F[static_cast<std::size_t>(k - 1)].str(), pv_defect(p, k)});
  r.series.push_back(std::move(s));
}

void cmd_expand(RunReport& r) {
  const auto& c = r.config;
  if (c.base.real) throw Error(ErrorCode::ConfigInvalid, "base.minpoly: command expand needs a minimal polynomial");
  if (!(c.estimation.x >= 0 && c.estimation.x < 1))
    throw Error(ErrorCode::ConfigInvalid, "estimation.x: expand needs x in [0, 1)");
  const auto p = make_pisot(c.base.minpoly);
  const auto d = beta_expand(p, c.estimation.x, c.estimation.digits);
  r.results["x"] = c.estimation.x;
  r.results["digits"] = d.digits;
  r.results["admissible"] = is_admissible(p, d);
  r.results["value"] = static_cast<double>(digits_value(p, d));
  Series s{"digits", {"k", "digit"}, {}};
  for (std::size_t k = 0; k < d.digits.size(); ++k) s.rows.push_back({k + 1, d.digits[k]});
  r.series.push_back(std::move(s));
}

void cmd_lyapunov(RunReport& r) {
  const auto& c = r.config;
  const auto M = make_matrix(c);
  try_certify(r, M, c.estimation.q);
  Timer t(r, "lyapunov");
  const auto L = lyapunov_top(M, c.estimation.q, make_spec(c));
  r.results["q"] = L.q;
  r.results["estimate"] = L.estimate;
  r.results["argmin_n"] = L.argmin_n;
  r.results["extrapolated"] = L.extrapolated;
  r.results["samples"] = L.samples_used;
  Series s{"L_n", {"n", "L_n", "dispersion"}, {}};
  for (std::size_t i = 0; i < L.n.size(); ++i) s.rows.push_back({L.n[i], L.per_n[i], L.dispersion[i]});
  r.series.push_back(std::move(s));
  Series d{"diagnostics", {"n", "q", "x", "f_n", "running"}, {}};
  for (const auto& row : L.rows) d.rows.push_back({row.n, row.q, row.x, row.f_n, row.running});
  r.series.push_back(std::move(d));
}

void spectrum_series(RunReport& r, const std::vector<double>& ex, const std::vector<int>& mult) {
  Series s{"spectrum", {"r", "lambda", "multiplicity"}, {}};
  for (std::size_t i = 0; i < ex.size(); ++i) s.rows.push_back({i + 1, ex[i], mult[i]});
  r.series.push_back(std::move(s));
}

void cmd_spectrum(RunReport& r) {
  const auto& c = r.config;
  const auto M = make_matrix(c);
  try_certify(r, M, 1);
  Timer t(r, "spectrum");
  const auto S = lyapunov_spectrum(M, make_spec(c));
  r.results["exponents"] = S.exponents;
  r.results["multiplicities"] = S.multiplicities;
  r.results["cluster_tol"] = S.cluster_tol;
  spectrum_series(r, S.exponents, S.multiplicities);
  Series s{"sums", {"q", "L_q", "individual"}, {}};
  for (std::size_t q = 0; q < S.sums.size(); ++q) s.rows.push_back({q + 1, S.sums[q], S.individual[q]});
  r.series.push_back(std::move(s));
}

void cmd_oseledec(RunReport& r) {
  const auto& c = r.config;
  const auto M = make_matrix(c);
  try_certify(r, M, 1);
  Timer t(r, "oseledec");
  const auto O = oseledec_at(M, c.estimation.x, c.estimation.n, c.estimation.cluster_tol);
  r.results["x"] = O.x;
  r.results["n"] = O.n_used;
  r.results["exponents"] = O.exponents;
  r.results["multiplicities"] = O.multiplicities;
  r.results["singular_rates"] = O.singular_rates;
  r.results["log_det_rate"] = O.log_det_rate;
  spectrum_series(r, O.exponents, O.multiplicities);
  Series f{"filtration", {"r", "dim", "basis_re", "basis_im"}, {}};
  for (std::size_t i = 0; i < O.filtration.size(); ++i) {
    const auto& V = O.filtration[i];
    std::vector<double> re, im;
    for (Eigen::Index col = 0; col < V.cols(); ++col)
      for (Eigen::Index row = 0; row < V.rows(); ++row) {
        re.push_back(V(row, col).real());
        im.push_back(V(row, col).imag());
      }
    f.rows.push_back({i + 1, V.cols(), vec(re).dump(), vec(im).dump()});
  }
  r.series.push_back(std::move(f));
}

void cmd_certify(RunReport& r) {
  const auto& c = r.config;
  const auto M = make_matrix(c);
  const auto k = try_certify(r, M, c.estimation.q);
  r.results["certified"] = k.has_value();
  if (!k || !c.estimation.verify) return;
  Timer t(r, "verify");
  VerifyOptions o;
  o.tau_count = c.estimation.verify_tau;
  o.threads = c.threads;
  const auto v = joint_period_verify(M, c.estimation.q, *k, k->lattice_level, c.estimation.verify_n, o);
  r.results["verify"] = {{"max_deviation", v.max_deviation}, {"bound", k->script_C}, {"tau", v.tau}, {"n", v.n},
                         {"x", v.x}};
}

void cmd_solve(RunReport& r) {
  const auto& c = r.config;
  const auto eq = make_equation(c);
  const auto s = solve(eq, c.estimation.tol);
  r.results["tail_constant"] = s.tail_constant();
  r.results["residual_tolerance"] = s.residual_tolerance();
  r.results["simple_eigenvalue_derivative"] = check_simple_eigenvalue(eq).derivative;
  r.results["variable"] = "companion cocycle in y = x / beta^" + std::to_string(eq.dim() - 1);
  Timer t(r, "solve");
  Series f{"F", {"x", "re_F", "im_F", "residual", "depth"}, {}};
  for (double x : c.estimation.queries) {
    const cplx v = s.F(x);
    f.rows.push_back({x, v.real(), v.imag(), s.residual(x), s.depth(x)});
  }
  r.series.push_back(std::move(f));
}

void asymptotics_block(RunReport& r, const MultiperiodicEquation& eq) {
  const auto& c = r.config;
  const auto s = solve(eq, c.estimation.tol);
  r.results["variable"] = "companion cocycle in y = x / beta^" + std::to_string(eq.dim() - 1);
  r.results["theoremB_gate"] = theoremB_gate(eq);
  if (eq.base().is_pisot()) {
    const auto g = theoremC_gate(eq);
    r.results["theoremC_holds"] = g.holds;
    r.results["theoremC_sup"] = std::isinf(g.sup_value) ? json("inf") : json(g.sup_value);
    if (g.division_near_zero) r.warnings.push_back("theoremC: |f_d| nearly vanishes on the grid");
  }
  try_certify(r, s.companion(), 1);

  Timer t(r, "asymptotics");
  const std::size_t n = c.estimation.n_max;
  const auto bits = static_cast<mpfr_prec_t>(64 + static_cast<double>(n) * std::log2(eq.base().beta()));
  std::mt19937_64 rng(c.seed);
  std::vector<BigReal> xs;
  for (std::size_t i = 0; i < c.estimation.points; ++i)
    xs.push_back(BigReal::uniform(rng, c.estimation.window_lo, c.estimation.window_hi, bits));
  std::vector<AsymptoticResult> res(xs.size());
  parallel_for(xs.size(), c.threads, [&](std::size_t i) { res[i] = asymptotic_exponent(s, xs[i], n); });

  double mean = 0, var = 0;
  for (const auto& a : res) mean += a.estimate / static_cast<double>(res.size());
  for (const auto& a : res) var += (a.estimate - mean) * (a.estimate - mean);
  const double sd = res.size() > 1 ? std::sqrt(var / static_cast<double>(res.size() - 1)) : 0.0;

  EstimationSpec spec = make_spec(c);
  spec.ladder = {n};
  const auto L = lyapunov_top(s.companion(), 1, spec);
  r.results["n_max"] = n;
  r.results["points"] = res.size();
  r.results["lambda_estimate"] = mean;
  r.results["lambda_dispersion"] = sd;
  r.results["lyapunov_estimate"] = L.estimate;
  r.results["lambda_minus_lyapunov"] = mean - L.estimate;

  Series h{"h_n", {"n", "h_n"}, {}};
  for (std::size_t k = 0; k < res.front().h.size(); ++k) h.rows.push_back({k + 1, res.front().h[k]});
  r.series.push_back(std::move(h));
  Series e{"estimates", {"x", "estimate", "trend"}, {}};
  for (const auto& a : res) e.rows.push_back({a.x, a.estimate, a.trend});
  r.series.push_back(std::move(e));
}

void cmd_asymptotics(RunReport& r) { asymptotics_block(r, make_equation(r.config)); }

void cmd_moments(RunReport& r) {
  const auto& c = r.config;
  const bool have_matrix = c.matrix.dim > 0;
  const bool have_eq = !c.equation.determining.empty();
  if (!have_matrix && !have_eq) missing(c, "matrix or equation");
  QuadratureOptions o;
  o.threads = c.threads;
  if (have_matrix) {
    Timer t(r, "moment_growth");
    const auto g = moment_growth(make_matrix(c), c.estimation.moment_q, c.estimation.moment_n_max, o);
    r.results["q"] = g.q;
    r.results["fekete_rate"] = g.fekete_rate;
    r.results["last_difference"] = g.last_difference;
    r.results["log_C"] = g.log_C;
    r.results["intervals"] = g.intervals;
    Series s{"Z_n", {"n", "log_Z_n", "rate"}, {}};
    for (std::size_t n = 1; n <= g.z.size(); ++n) s.rows.push_back({n, g.z[n - 1], g.z[n - 1] / static_cast<double>(n)});
    r.series.push_back(std::move(s));
  }
  if (have_eq) {
    Timer t(r, "moment_integral_F");
    const auto s = solve(make_equation(c), c.estimation.tol);
    const auto L = moment_integral_F(s, c.estimation.moment_q, c.estimation.moment_ladder, o);
    r.results["F_literal_change"] = L.literal_change;
    r.results["F_log_change"] = L.log_change;
    r.results["F_literal_stable"] = L.literal_stable;
    r.results["F_log_stable"] = L.log_stable;
    if (!L.literal_stable) r.warnings.push_back("non-stabilizing ladder: (1/log T) int_0^T |F|^q");
    if (!L.log_stable) r.warnings.push_back("non-stabilizing ladder: (1/log T) log int_0^T |F|^q");
    Series m{"moment_F", {"n", "T", "literal", "log_form"}, {}};
    for (const auto& row : L.rows) m.rows.push_back({row.n, row.T, row.literal, row.log_form});
    r.series.push_back(std::move(m));
  }
}

void cmd_bernoulli(RunReport& r) {
  const auto& c = r.config;
  const auto eq = make_equation(c);
  r.results["p"] = c.bernoulli.p;
  r.results["a"] = c.bernoulli.a;
  r.results["b"] = c.bernoulli.b;
  r.results["D"] = *eq.max_norm_distortion;
  if (eq.base().is_pisot()) {
    r.results["rho"] = eq.base().rho();
    r.results["D_rho"] = *eq.max_norm_distortion * eq.base().rho();
  }
  asymptotics_block(r, eq);
}

}  // namespace

const Series& RunReport::find(std::string_view name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw Error(ErrorCode::UnknownSeries, "no series '" + std::string(name) + "' in this report");
}

RunReport run(const ExperimentConfig& config) {
  RunReport r;
  r.config = config;
  r.results["seed"] = config.seed;
  static const std::map<Command, std::function<void(RunReport&)>> table = {
      {Command::Pisot, cmd_pisot},       {Command::Expand, cmd_expand},     {Command::Lyapunov, cmd_lyapunov},
      {Command::Spectrum, cmd_spectrum}, {Command::Oseledec, cmd_oseledec}, {Command::Certify, cmd_certify},
      {Command::Solve, cmd_solve},       {Command::Asymptotics, cmd_asymptotics},
      {Command::Moments, cmd_moments},   {Command::Bernoulli, cmd_bernoulli},
  };
  try {
    Timer t(r, "total");
    table.at(config.command)(r);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    std::string msg = e.what();
    const std::string prefix = std::string(pvc::to_string(e.code())) + ": ";
    if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
    throw Error(e.code(), "command " + std::string(to_string(config.command)) + ": " + msg);
  }
  return r;
}

}  // namespace pvc::cli
