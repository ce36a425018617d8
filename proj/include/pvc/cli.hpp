#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pvc/error.hpp"

namespace pvc::cli {

enum class Command { Pisot, Expand, Lyapunov, Spectrum, Oseledec, Certify, Solve, Asymptotics, Moments, Bernoulli };
enum class Format { Csv, Json };

std::string_view to_string(Command c);
Command parse_command(std::string_view s);
std::string_view to_string(Format f);
Format parse_format(std::string_view s);

struct BaseSpec {
  /// leading coefficient first; {1, -1, -1} is the golden ratio
  std::vector<std::int64_t> minpoly = {1, -2};
  /// plain real beta > 1; takes precedence over minpoly
  std::optional<double> real;
  bool operator==(const BaseSpec&) const = default;
};

struct EntrySpec {
  /// "(freq, re, im) ..." with freq like 2pi*1
  std::string h;
  int ell = 0;
  bool operator==(const EntrySpec&) const = default;
};

struct MatrixSpec {
  int dim = 0;
  std::vector<EntrySpec> entries;  // row-major
  double holder_alpha = 1.0;
  std::optional<double> positivity_delta;
  bool operator==(const MatrixSpec&) const = default;
};

struct EquationSpec {
  std::vector<std::string> determining;
  bool operator==(const EquationSpec&) const = default;
};

struct BernoulliSpec {
  double p = 0.2;
  int a = 0;
  int b = 1;
  bool operator==(const BernoulliSpec&) const = default;
};

struct EstimationConfig {
  std::vector<std::size_t> ladder = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  std::size_t samples = 1000;
  double window_lo = 1.0;
  double window_hi = 2.0;
  double cluster_tol = 0;  // 0: 5 / max n
  int q = 1;
  /// oseledec depth
  std::size_t n = 64;
  /// oseledec point, expand input
  double x = 1.3;
  /// expand digits
  int digits = 20;
  /// solve query points
  std::vector<double> queries = {0.5, 1.0, 2.0};
  double tol = 1e-12;
  int lattice_level = 8;
  bool verify = false;
  std::size_t verify_tau = 64;
  std::vector<std::size_t> verify_n = {10, 20, 40};
  /// asymptotics: random x in the window, depth n_max
  std::size_t points = 50;
  std::size_t n_max = 200;
  /// moments: q, depth for the matrix moments, ladder for the F moments
  double moment_q = 1.0;
  std::size_t moment_n_max = 12;
  std::vector<std::size_t> moment_ladder = {8, 12, 16, 20};
  bool operator==(const EstimationConfig&) const = default;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  Format format = Format::Csv;
  /// when set, only this series is written, as plain CSV
  std::string series;
  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  Command command = Command::Pisot;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  BaseSpec base;
  MatrixSpec matrix;
  EquationSpec equation;
  BernoulliSpec bernoulli;
  EstimationConfig estimation;
  OutputSpec output;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws Error(ConfigInvalid) naming the offending field.
ExperimentConfig parse_config(std::string_view yaml_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_yaml(const ExperimentConfig& c);
nlohmann::ordered_json config_to_json(const ExperimentConfig& c);

struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
};

struct RunReport {
  ExperimentConfig config;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Series> series;
  std::vector<std::string> certificates;
  std::vector<std::string> warnings;
  /// seconds per step; excluded from the result rows
  std::vector<std::pair<std::string, double>> timings;

  const Series& find(std::string_view name) const;
};

/// Dispatches to the core operation. Core errors are rethrown with the
/// command name prefixed.
RunReport run(const ExperimentConfig& config);

/// Header row plus rows of the named series; throws Error(UnknownSeries).
void emit_plot_data(const RunReport& r, std::string_view series, std::ostream& os);
/// Result rows and series; `with_timings` adds wall-clock times.
std::string render(const RunReport& r, Format f, bool with_timings = true);
/// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::string& path, const std::string& content);

/// 1 for configuration errors, 3 for CertificateViolated, 2 otherwise.
int exit_code_for(ErrorCode code);

/// Entry point of the pvcocycle tool: 0 success, 1 config error,
/// 2 computation error, 3 certificate violation.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pvc::cli
