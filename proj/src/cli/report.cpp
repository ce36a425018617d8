#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pvc/cli.hpp"
#include "pvc/error.hpp"

namespace pvc::cli {
namespace {

using json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell(const json& v) { return csv_field(v.is_string() ? v.get<std::string>() : v.dump()); }

void write_series(const Series& s, std::ostream& os) {
  for (std::size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << csv_field(s.columns[i]);
  os << "\n";
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << "\n";
  }
}

}  // namespace

void emit_plot_data(const RunReport& r, std::string_view series, std::ostream& os) { write_series(r.find(series), os); }

std::string render(const RunReport& r, Format f, bool with_timings) {
  std::ostringstream os;
  if (f == Format::Json) {
    json j;
    j["config"] = config_to_json(r.config);
    j["results"] = r.results;
    j["certificates"] = r.certificates;
    j["warnings"] = r.warnings;
    j["series"] = json::object();
    for (const auto& s : r.series) j["series"][s.name] = {{"columns", s.columns}, {"rows", s.rows}};
    if (with_timings) {
      j["timings"] = json::object();
      for (const auto& [k, v] : r.timings) j["timings"][k] = v;
    }
    os << j.dump(2) << "\n";
    return os.str();
  }
  os << "record,key,value\n";
  os << "config,echo," << csv_field(config_to_json(r.config).dump()) << "\n";
  for (const auto& [k, v] : r.results.items()) os << "result," << csv_field(k) << "," << cell(v) << "\n";
  for (const auto& c : r.certificates) os << "certificate,," << csv_field(c) << "\n";
  for (const auto& w : r.warnings) os << "warning,," << csv_field(w) << "\n";
  if (with_timings)
    for (const auto& [k, v] : r.timings) os << "timing," << csv_field(k) << "," << json(v).dump() << "\n";
  for (const auto& s : r.series) {
    os << "\n# series " << s.name << "\n";
    write_series(s, os);
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::InvalidArgument, "cannot rename onto '" + path + "': " + ec.message());
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::UnknownSeries:
      return 1;
    case ErrorCode::CertificateViolated:
      return 3;
    default:
      return 2;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pvcocycle: Lyapunov exponents of beta-adapted cocycles and multiperiodic equations"};
  std::string command, config_path, out_path, format, series;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  app.add_option("command", command,
                 "pisot | expand | lyapunov | spectrum | oseledec | certify | solve | asymptotics | moments | bernoulli");
  app.add_option("--config", config_path, "YAML experiment file")->required();
  app.add_option("--out", out_path, "report path (default: stdout)");
  app.add_option("--format", format, "csv | json");
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--threads", threads, "worker threads (0: hardware)");
  app.add_option("--series", series, "write only this series as CSV");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig c = load_config(config_path);
    if (!command.empty()) c.command = parse_command(command);
    if (!out_path.empty()) c.output.path = out_path;
    if (!format.empty()) c.output.format = parse_format(format);
    if (seed) c.seed = *seed;
    if (threads) c.threads = *threads;
    if (!series.empty()) c.output.series = series;

    const RunReport r = run(c);
    std::string text;
    if (!c.output.series.empty()) {
      std::ostringstream os;
      emit_plot_data(r, c.output.series, os);
      text = os.str();
    } else {
      text = render(r, c.output.format);
    }
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    if (c.output.path.empty())
      out << text;
    else
      write_atomic(c.output.path, text);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace pvc::cli
