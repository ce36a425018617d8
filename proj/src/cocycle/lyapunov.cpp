#include "pvc/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "pvc/error.hpp"
#include "pvc/parallel.hpp"
#include "pvc/product.hpp"

namespace pvc {

std::vector<std::size_t> default_ladder(int K) {
  require(K >= 1 && K <= 24, ErrorCode::InvalidArgument, "ladder exponent out of range");
  std::vector<std::size_t> out;
  for (int k = 1; k <= K; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

std::vector<LyapunovResult> lyapunov_all(const BetaAdaptedMatrix& M, std::span<const int> qs,
                                         const EstimationSpec& spec) {
  require(!spec.ladder.empty(), ErrorCode::InvalidArgument, "empty n ladder");
  require(std::is_sorted(spec.ladder.begin(), spec.ladder.end()) && spec.ladder.front() >= 1,
          ErrorCode::InvalidArgument, "n ladder must be increasing and >= 1");
  require(spec.samples >= 1, ErrorCode::InvalidArgument, "need at least one x-sample");
  for (int q : qs) require(q >= 1 && q <= M.dim(), ErrorCode::InvalidArgument, "q out of range");
  const std::size_t n_max = spec.ladder.back();
  const std::size_t L = spec.ladder.size();

  const std::size_t S = M.is_constant() ? 1 : spec.samples;
  std::mt19937_64 rng(spec.seed);
  const auto xs = stratified_points(rng, M.base(), spec.window_lo, spec.window_hi, S,
                                    n_max + static_cast<std::size_t>(M.max_scale_exponent()));

  // values[s][qi][l] = f_n(x_s) / n
  std::vector<std::vector<std::vector<double>>> values(S);
  parallel_for(S, spec.threads, [&](std::size_t s) {
    const auto factors = M.along_orbit(xs[s], n_max);
    auto& v = values[s];
    v.resize(qs.size());
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      v[qi] = log_norms_at(factors, qs[qi], spec.ladder);
      for (std::size_t l = 0; l < L; ++l) v[qi][l] /= static_cast<double>(spec.ladder[l]);
    }
  });

  std::vector<LyapunovResult> out(qs.size());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    auto& r = out[qi];
    r.q = qs[qi];
    r.n = spec.ladder;
    r.samples_used = S;
    r.per_n.assign(L, 0.0);
    r.dispersion.assign(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) {
      double mean = 0;
      for (std::size_t s = 0; s < S; ++s) mean += values[s][qi][l];
      mean /= static_cast<double>(S);
      double var = 0;
      for (std::size_t s = 0; s < S; ++s) var += (values[s][qi][l] - mean) * (values[s][qi][l] - mean);
      r.per_n[l] = mean;
      r.dispersion[l] = S > 1 ? std::sqrt(var / static_cast<double>(S - 1)) : 0.0;
    }
    const auto it = std::min_element(r.per_n.begin(), r.per_n.end());
    r.estimate = *it;
    r.argmin_n = r.n[static_cast<std::size_t>(it - r.per_n.begin())];
    r.extrapolated = r.per_n.back();
    if (L >= 2 && r.n[L - 1] == 2 * r.n[L - 2]) r.extrapolated = 2 * r.per_n[L - 1] - r.per_n[L - 2];
    for (std::size_t s = 0; s < std::min(S, spec.diagnostic_samples); ++s) {
      double running = INFINITY;
      for (std::size_t l = 0; l < L; ++l) {
        const double v = values[s][qi][l];
        running = std::min(running, v);
        r.rows.push_back({r.n[l], r.q, xs[s].to_double(), v * static_cast<double>(r.n[l]), running});
      }
    }
  }
  return out;
}

LyapunovResult lyapunov_top(const BetaAdaptedMatrix& M, int q, const EstimationSpec& spec) {
  const int qs[] = {q};
  return std::move(lyapunov_all(M, qs, spec).front());
}

ExponentClusters cluster_exponents(std::span<const double> values, double tol) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  ExponentClusters c;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v[i] - v[i - 1] > tol) {
      double s = 0;
      for (std::size_t j = start; j < i; ++j) s += v[j];
      c.exponents.push_back(s / static_cast<double>(i - start));
      c.multiplicities.push_back(static_cast<int>(i - start));
      start = i;
    }
  }
  return c;
}

SpectrumResult lyapunov_spectrum(const BetaAdaptedMatrix& M, const EstimationSpec& spec) {
  const int d = M.dim();
  std::vector<int> qs(static_cast<std::size_t>(d));
  for (int q = 1; q <= d; ++q) qs[static_cast<std::size_t>(q - 1)] = q;
  SpectrumResult r;
  r.per_q = lyapunov_all(M, qs, spec);
  r.cluster_tol = spec.cluster_tol > 0 ? spec.cluster_tol : 5.0 / static_cast<double>(spec.ladder.back());
  double prev = 0;
  for (const auto& lq : r.per_q) {
    r.sums.push_back(lq.estimate);
    r.individual.push_back(lq.estimate - prev);
    prev = lq.estimate;
  }
  for (std::size_t q = 1; q < r.individual.size(); ++q)
    require(r.individual[q] <= r.individual[q - 1] + r.cluster_tol, ErrorCode::NonMonotoneSums,
            "L_q - L_{q-1} increases at q = " + std::to_string(q + 1) + "; estimates have not converged");
  const auto c = cluster_exponents(r.individual, r.cluster_tol);
  r.exponents = c.exponents;
  r.multiplicities = c.multiplicities;
  return r;
}

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticRow> rows) {
  os << "n,q,x,f_n,running\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g\n", r.n, r.q, r.x, r.f_n, r.running);
    os << buf;
  }
}

}  // namespace pvc
