#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pvc/cli.hpp"
#include "pvc/error.hpp"

using namespace pvc;
using namespace pvc::cli;

namespace {

const char* kGoldenLyapunov = R"yaml(
command: lyapunov
seed: 5
base: {minpoly: [1, -1, -1]}
matrix:
  dim: 2
  entries:
    - {h: "(0, 3, 0) (2pi*1, 0.5, 0) (-2pi*1, 0.5, 0)", ell: 0}
    - "(0, 1, 0)"
    - {h: "(2pi*1, 0, -0.25) (-2pi*1, 0, 0.25)", ell: 1}
    - "(0, 0.5, 0)"
estimation:
  ladder: [8, 16, 32]
  samples: 64
)yaml";

ExperimentConfig config(const std::string& text) { return parse_config(text); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "pvc_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = config("");
  EXPECT_EQ(c.command, Command::Pisot);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.estimation.samples, 1000u);
  EXPECT_EQ(c.output.format, Format::Csv);
}

TEST(Config, RoundTrip) {
  auto c = config(kGoldenLyapunov);
  c.matrix.positivity_delta = 0.125;
  c.estimation.tol = 1e-11;
  c.estimation.x = 0.1;
  c.base.real = 2.5;
  c.output.format = Format::Json;
  const auto again = parse_config(config_to_yaml(c));
  EXPECT_EQ(again, c);
  EXPECT_EQ(config_to_yaml(again), config_to_yaml(c));
}

TEST(Config, FieldLevelErrors) {
  try {
    (void)config("estimation: {sampels: 3}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
    EXPECT_NE(std::string(e.what()).find("estimation.sampels"), std::string::npos);
  }
  try {
    (void)config("estimation: {samples: many}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("estimation.samples"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { (void)config("command: frobnicate"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { (void)config("matrix: {dim: 2, entries: [\"(0,1,0)\"]}"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { (void)config("bernoulli: {p: 1.5}"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { (void)config("output: {format: xml}"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { (void)config("base: {real: 0.5}"); }), ErrorCode::ConfigInvalid);
}

TEST(Config, TripleListEntries) {
  const auto c = config(R"yaml(
equation:
  determining: [[[1, 0.5, 0], [-1, 0.5, 0]]]
)yaml");
  ASSERT_EQ(c.equation.determining.size(), 1u);
  EXPECT_EQ(c.equation.determining[0], "(1, 0.5, 0) (-1, 0.5, 0)");
}

TEST(Run, PisotGolden) {
  const auto r = run(config("command: pisot\nbase: {minpoly: [1, -1, -1]}\nestimation: {n: 10}"));
  EXPECT_NEAR(r.results["beta"].get<double>(), 1.6180339887, 1e-10);
  EXPECT_NEAR(r.results["rho"].get<double>(), 0.6180339887, 1e-10);
  const auto& t = r.find("traces");
  ASSERT_EQ(t.rows.size(), 10u);
  EXPECT_EQ(t.rows[9][1].get<std::string>(), "123");  // Lucas L_10
}

TEST(Run, SolveViete) {
  const auto r = run(config(R"yaml(
command: solve
equation: {determining: ["(1, 0.5, 0) (-1, 0.5, 0)"]}
estimation: {queries: [1.5707963267948966]}
)yaml"));
  EXPECT_NEAR(r.find("F").rows[0][1].get<double>(), 2 / std::numbers::pi, 1e-10);
}

TEST(Run, LyapunovIdentity) {
  const auto r = run(config(R"yaml(
command: lyapunov
base: {minpoly: [1, -1, -1]}
matrix: {dim: 2, entries: ["(0, 1, 0)", "(0, 0, 0)", "(0, 0, 0)", "(0, 1, 0)"]}
estimation: {ladder: [4, 16], samples: 8}
)yaml"));
  EXPECT_NEAR(r.results["estimate"].get<double>(), 0.0, 1e-12);
}

TEST(Run, UncertifiedWarning) {
  const auto r = run(config(kGoldenLyapunov));
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.warnings[0].rfind("uncertified", 0), 0u);
  const auto csv = render(r, Format::Csv);
  EXPECT_NE(csv.find("warning,,uncertified"), std::string::npos);
}

TEST(Run, CertifiedHasNoWarning) {
  const auto r = run(config("command: bernoulli\nbase: {minpoly: [1, -1, -1]}\nestimation: {n_max: 60, points: 8, samples: 32}"));
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.certificates.size(), 1u);
  EXPECT_TRUE(r.results.contains("lambda_estimate"));
  EXPECT_TRUE(r.results.contains("lyapunov_estimate"));
}

TEST(Run, MissingBlock) {
  EXPECT_EQ(code_of([] { (void)run(config("command: solve")); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { (void)run(config("command: spectrum")); }), ErrorCode::ConfigInvalid);
}

TEST(Run, CoreErrorsCarryCommand) {
  try {
    (void)run(config("command: pisot\nbase: {minpoly: [1, 0, -2]}"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("command pisot"), std::string::npos);
  }
}

TEST(Report, Determinism) {
  auto c = config(kGoldenLyapunov);
  c.threads = 1;
  // the config echo carries the thread count; compare what follows it
  auto body = [](const std::string& s) { return s.substr(s.find("\nresult,")); };
  const auto a = body(render(run(c), Format::Csv, false));
  const auto b = body(render(run(c), Format::Csv, false));
  c.threads = 3;
  const auto d = body(render(run(c), Format::Csv, false));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
}

TEST(Report, SeriesColumns) {
  const auto asym = run(config(R"yaml(
command: asymptotics
equation: {determining: ["(0, 0.6666666666666666, 0) (2pi*1, 0.16666666666666666, 0) (-2pi*1, 0.16666666666666666, 0)"]}
estimation: {n_max: 40, points: 4, samples: 16}
)yaml"));
  std::ostringstream os;
  emit_plot_data(asym, "h_n", os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "n,h_n");

  const auto spec = run(config(R"yaml(
command: spectrum
matrix: {dim: 2, entries: ["(0, 3, 0)", "(0, 0, 0)", "(0, 0, 0)", "(0, 0.3333333333333333, 0)"]}
estimation: {ladder: [64], samples: 4}
)yaml"));
  std::ostringstream s2;
  emit_plot_data(spec, "spectrum", s2);
  EXPECT_EQ(s2.str().substr(0, s2.str().find('\n')), "r,lambda,multiplicity");

  const auto mom = run(config(R"yaml(
command: moments
matrix: {dim: 1, entries: ["(0, 2, 0) (2pi*1, 0.5, 0) (-2pi*1, 0.5, 0)"]}
estimation: {moment_n_max: 6}
)yaml"));
  std::ostringstream s3;
  emit_plot_data(mom, "Z_n", s3);
  EXPECT_EQ(s3.str().substr(0, s3.str().find('\n')), "n,log_Z_n,rate");
  EXPECT_EQ(code_of([&] { emit_plot_data(mom, "nope", s3); }), ErrorCode::UnknownSeries);
}

TEST(Report, JsonParses) {
  const auto r = run(config("command: expand\nbase: {minpoly: [1, -1, -1]}\nestimation: {x: 0.5, digits: 12}"));
  const auto j = nlohmann::json::parse(render(r, Format::Json));
  EXPECT_EQ(j["config"]["command"], "expand");
  EXPECT_EQ(j["results"]["admissible"], true);
  EXPECT_EQ(j["series"]["digits"]["rows"].size(), 12u);
}

TEST(Main, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::ConfigInvalid), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::CertificateViolated), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::NotPisot), 2);

  const auto good = scratch("good.yaml");
  std::ofstream(good) << "command: pisot\nbase: {minpoly: [1, -1, -1]}\n";
  const auto bad = scratch("bad.yaml");
  std::ofstream(bad) << "estimation: {bogus: 1}\n";
  const auto notpv = scratch("notpv.yaml");
  std::ofstream(notpv) << "command: pisot\nbase: {minpoly: [1, 0, -2]}\n";
  const auto out = scratch("report.json");
  std::filesystem::remove(out);

  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream o, e;
    return main_entry(static_cast<int>(argv.size()), argv.data(), o, e);
  };
  EXPECT_EQ(call({"pvcocycle", "--config", good.string(), "--format", "json", "--out", out.string()}), 0);
  EXPECT_TRUE(std::filesystem::exists(out));
  std::size_t files = 0;
  for (const auto& f : std::filesystem::directory_iterator(out.parent_path()))
    if (f.path().string().find(".tmp") != std::string::npos) ++files;
  EXPECT_EQ(files, 0u);
  EXPECT_EQ(call({"pvcocycle", "--config", bad.string()}), 1);
  EXPECT_EQ(call({"pvcocycle", "--config", (out.parent_path() / "missing.yaml").string()}), 1);
  EXPECT_EQ(call({"pvcocycle", "--config", notpv.string()}), 2);
  EXPECT_EQ(call({"pvcocycle", "pisot"}), 1);
  EXPECT_EQ(call({"pvcocycle", "--config", good.string(), "--series", "nope"}), 1);
}
