#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "pvc/cli.hpp"
#include "pvc/error.hpp"

namespace pvc::cli {
namespace {

constexpr std::array<std::pair<Command, std::string_view>, 10> kCommands = {{
    {Command::Pisot, "pisot"},
    {Command::Expand, "expand"},
    {Command::Lyapunov, "lyapunov"},
    {Command::Spectrum, "spectrum"},
    {Command::Oseledec, "oseledec"},
    {Command::Certify, "certify"},
    {Command::Solve, "solve"},
    {Command::Asymptotics, "asymptotics"},
    {Command::Moments, "moments"},
    {Command::Bernoulli, "bernoulli"},
}};

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + what);
}

void check_keys(const YAML::Node& n, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!n.IsMap()) invalid(where.empty() ? "<root>" : where, "expected a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      invalid(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) invalid(field, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    invalid(field, "cannot read '" + n.Scalar() + "'");
  }
}

template <class T>
void read(const YAML::Node& parent, std::string_view key, const std::string& where, T& out) {
  const auto n = parent[std::string(key)];
  if (!n) return;
  const std::string field = where.empty() ? std::string(key) : where + "." + std::string(key);
  if constexpr (requires { out.push_back(std::declval<typename T::value_type>()); } &&
                !std::is_same_v<T, std::string>) {
    if (!n.IsSequence()) invalid(field, "expected a list");
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i)
      out.push_back(scalar<typename T::value_type>(n[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out = scalar<T>(n, field);
  }
}

void positive(double v, const std::string& field) {
  if (!(v > 0)) invalid(field, "must be positive");
}

// one f_j: text, or a list of [freq, re, im] triples
std::string trig_text(const YAML::Node& n, const std::string& field) {
  if (n.IsScalar()) return n.as<std::string>();
  if (!n.IsSequence()) invalid(field, "expected a polynomial string or a list of [freq, re, im]");
  std::string s;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto t = n[i];
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!t.IsSequence() || t.size() != 3) invalid(f, "expected [freq, re, im]");
    if (!s.empty()) s += " ";
    s += "(" + scalar<std::string>(t[0], f) + ", " + scalar<std::string>(t[1], f) + ", " +
         scalar<std::string>(t[2], f) + ")";
  }
  return s;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [k, s] : kCommands)
    if (k == c) return s;
  return "?";
}

Command parse_command(std::string_view s) {
  for (const auto& [k, name] : kCommands)
    if (name == s) return k;
  invalid("command", "unknown command '" + std::string(s) + "'");
}

std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  invalid("output.format", "expected csv or json, got '" + std::string(s) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    invalid("<yaml>", e.what());
  }
  ExperimentConfig c;
  if (!root || root.IsNull()) return c;
  check_keys(root, "", {"command", "seed", "threads", "base", "matrix", "equation", "bernoulli", "estimation", "output"});

  if (root["command"]) c.command = parse_command(scalar<std::string>(root["command"], "command"));
  read(root, "seed", "", c.seed);
  read(root, "threads", "", c.threads);

  if (const auto b = root["base"]) {
    check_keys(b, "base", {"minpoly", "real"});
    read(b, "minpoly", "base", c.base.minpoly);
    if (b["real"]) {
      double r = 0;
      read(b, "real", "base", r);
      if (!(r > 1)) invalid("base.real", "beta must exceed 1");
      c.base.real = r;
    }
    if (c.base.minpoly.size() < 2) invalid("base.minpoly", "need at least two coefficients");
  }

  if (const auto m = root["matrix"]) {
    check_keys(m, "matrix", {"dim", "entries", "holder_alpha", "positivity_delta"});
    read(m, "dim", "matrix", c.matrix.dim);
    read(m, "holder_alpha", "matrix", c.matrix.holder_alpha);
    if (m["positivity_delta"]) {
      double d = 0;
      read(m, "positivity_delta", "matrix", d);
      positive(d, "matrix.positivity_delta");
      c.matrix.positivity_delta = d;
    }
    if (const auto e = m["entries"]) {
      if (!e.IsSequence()) invalid("matrix.entries", "expected a list");
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string f = "matrix.entries[" + std::to_string(i) + "]";
        EntrySpec s;
        if (e[i].IsMap()) {
          check_keys(e[i], f, {"h", "ell"});
          if (!e[i]["h"]) invalid(f + ".h", "missing");
          s.h = trig_text(e[i]["h"], f + ".h");
          read(e[i], "ell", f, s.ell);
          if (s.ell < 0) invalid(f + ".ell", "scale exponent must be >= 0");
        } else {
          s.h = trig_text(e[i], f);
        }
        c.matrix.entries.push_back(std::move(s));
      }
    }
    if (c.matrix.dim < 1) invalid("matrix.dim", "must be >= 1");
    if (c.matrix.entries.size() != static_cast<std::size_t>(c.matrix.dim * c.matrix.dim))
      invalid("matrix.entries", "expected dim^2 = " + std::to_string(c.matrix.dim * c.matrix.dim) + " entries");
    if (!(c.matrix.holder_alpha > 0 && c.matrix.holder_alpha <= 1))
      invalid("matrix.holder_alpha", "must lie in (0, 1]");
  }

  if (const auto q = root["equation"]) {
    check_keys(q, "equation", {"determining"});
    const auto d = q["determining"];
    if (!d || !d.IsSequence() || d.size() == 0) invalid("equation.determining", "expected a nonempty list");
    for (std::size_t i = 0; i < d.size(); ++i)
      c.equation.determining.push_back(trig_text(d[i], "equation.determining[" + std::to_string(i) + "]"));
  }

  if (const auto b = root["bernoulli"]) {
    check_keys(b, "bernoulli", {"p", "a", "b"});
    read(b, "p", "bernoulli", c.bernoulli.p);
    read(b, "a", "bernoulli", c.bernoulli.a);
    read(b, "b", "bernoulli", c.bernoulli.b);
    if (!(c.bernoulli.p > 0 && c.bernoulli.p < 1)) invalid("bernoulli.p", "must lie in (0, 1)");
  }

  if (const auto e = root["estimation"]) {
    check_keys(e, "estimation",
               {"ladder", "samples", "window", "cluster_tol", "q", "n", "x", "digits", "queries", "tol",
                "lattice_level", "verify", "verify_tau", "verify_n", "points", "n_max", "moment_q", "moment_n_max",
                "moment_ladder"});
    auto& s = c.estimation;
    read(e, "ladder", "estimation", s.ladder);
    read(e, "samples", "estimation", s.samples);
    if (e["window"]) {
      std::vector<double> w;
      read(e, "window", "estimation", w);
      if (w.size() != 2 || !(w[0] < w[1])) invalid("estimation.window", "expected [lo, hi] with lo < hi");
      s.window_lo = w[0];
      s.window_hi = w[1];
    }
    read(e, "cluster_tol", "estimation", s.cluster_tol);
    read(e, "q", "estimation", s.q);
    read(e, "n", "estimation", s.n);
    read(e, "x", "estimation", s.x);
    read(e, "digits", "estimation", s.digits);
    read(e, "queries", "estimation", s.queries);
    read(e, "tol", "estimation", s.tol);
    read(e, "lattice_level", "estimation", s.lattice_level);
    read(e, "verify", "estimation", s.verify);
    read(e, "verify_tau", "estimation", s.verify_tau);
    read(e, "verify_n", "estimation", s.verify_n);
    read(e, "points", "estimation", s.points);
    read(e, "n_max", "estimation", s.n_max);
    read(e, "moment_q", "estimation", s.moment_q);
    read(e, "moment_n_max", "estimation", s.moment_n_max);
    read(e, "moment_ladder", "estimation", s.moment_ladder);
    if (s.ladder.empty() || std::find(s.ladder.begin(), s.ladder.end(), 0u) != s.ladder.end())
      invalid("estimation.ladder", "expected positive depths");
    if (s.samples == 0) invalid("estimation.samples", "must be >= 1");
    if (s.q < 1) invalid("estimation.q", "must be >= 1");
    if (s.n == 0) invalid("estimation.n", "must be >= 1");
    if (s.digits < 1) invalid("estimation.digits", "must be >= 1");
    positive(s.tol, "estimation.tol");
    if (s.lattice_level < 0) invalid("estimation.lattice_level", "must be >= 0");
    if (s.points == 0) invalid("estimation.points", "must be >= 1");
    if (s.n_max == 0) invalid("estimation.n_max", "must be >= 1");
    if (s.moment_q < 0) invalid("estimation.moment_q", "must be >= 0");
    if (s.moment_n_max < 2) invalid("estimation.moment_n_max", "must be >= 2");
    if (s.moment_ladder.size() < 2 || !std::is_sorted(s.moment_ladder.begin(), s.moment_ladder.end()) ||
        s.moment_ladder.front() == 0)
      invalid("estimation.moment_ladder", "expected an increasing list of at least two positive depths");
  }

  if (const auto o = root["output"]) {
    check_keys(o, "output", {"path", "format", "series"});
    read(o, "path", "output", c.output.path);
    if (o["format"]) c.output.format = parse_format(scalar<std::string>(o["format"], "output.format"));
    read(o, "series", "output", c.output.series);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

template <class T>
YAML::Node flow_list(const std::vector<T>& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (const auto& x : v) n.push_back(x);
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

}  // namespace

std::string config_to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  YAML::Node root;
  root["command"] = std::string(to_string(c.command));
  root["seed"] = c.seed;
  root["threads"] = c.threads;
  root["base"]["minpoly"] = flow_list(c.base.minpoly);
  if (c.base.real) root["base"]["real"] = *c.base.real;
  if (c.matrix.dim > 0) {
    auto m = root["matrix"];
    m["dim"] = c.matrix.dim;
    for (const auto& e : c.matrix.entries) {
      YAML::Node n;
      n["h"] = e.h;
      n["ell"] = e.ell;
      m["entries"].push_back(n);
    }
    m["holder_alpha"] = c.matrix.holder_alpha;
    if (c.matrix.positivity_delta) m["positivity_delta"] = *c.matrix.positivity_delta;
  }
  if (!c.equation.determining.empty())
    for (const auto& f : c.equation.determining) root["equation"]["determining"].push_back(f);
  root["bernoulli"]["p"] = c.bernoulli.p;
  root["bernoulli"]["a"] = c.bernoulli.a;
  root["bernoulli"]["b"] = c.bernoulli.b;
  const auto& s = c.estimation;
  auto e = root["estimation"];
  e["ladder"] = flow_list(s.ladder);
  e["samples"] = s.samples;
  e["window"] = flow_list(std::vector<double>{s.window_lo, s.window_hi});
  e["cluster_tol"] = s.cluster_tol;
  e["q"] = s.q;
  e["n"] = s.n;
  e["x"] = s.x;
  e["digits"] = s.digits;
  e["queries"] = flow_list(s.queries);
  e["tol"] = s.tol;
  e["lattice_level"] = s.lattice_level;
  e["verify"] = s.verify;
  e["verify_tau"] = s.verify_tau;
  e["verify_n"] = flow_list(s.verify_n);
  e["points"] = s.points;
  e["n_max"] = s.n_max;
  e["moment_q"] = s.moment_q;
  e["moment_n_max"] = s.moment_n_max;
  e["moment_ladder"] = flow_list(s.moment_ladder);
  root["output"]["path"] = c.output.path;
  root["output"]["format"] = std::string(to_string(c.output.format));
  root["output"]["series"] = c.output.series;
  out << root;
  return std::string(out.c_str()) + "\n";
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = to_string(c.command);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["base"]["minpoly"] = c.base.minpoly;
  if (c.base.real) j["base"]["real"] = *c.base.real;
  if (c.matrix.dim > 0) {
    j["matrix"]["dim"] = c.matrix.dim;
    j["matrix"]["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : c.matrix.entries) j["matrix"]["entries"].push_back({{"h", e.h}, {"ell", e.ell}});
    j["matrix"]["holder_alpha"] = c.matrix.holder_alpha;
    if (c.matrix.positivity_delta) j["matrix"]["positivity_delta"] = *c.matrix.positivity_delta;
  }
  if (!c.equation.determining.empty()) j["equation"]["determining"] = c.equation.determining;
  j["bernoulli"] = {{"p", c.bernoulli.p}, {"a", c.bernoulli.a}, {"b", c.bernoulli.b}};
  const auto& s = c.estimation;
  j["estimation"] = {{"ladder", s.ladder},
                     {"samples", s.samples},
                     {"window", {s.window_lo, s.window_hi}},
                     {"cluster_tol", s.cluster_tol},
                     {"q", s.q},
                     {"n", s.n},
                     {"x", s.x},
                     {"digits", s.digits},
                     {"queries", s.queries},
                     {"tol", s.tol},
                     {"lattice_level", s.lattice_level},
                     {"verify", s.verify},
                     {"verify_tau", s.verify_tau},
                     {"verify_n", s.verify_n},
                     {"points", s.points},
                     {"n_max", s.n_max},
                     {"moment_q", s.moment_q},
                     {"moment_n_max", s.moment_n_max},
                     {"moment_ladder", s.moment_ladder}};
  j["output"] = {{"path", c.output.path}, {"format", to_string(c.output.format)}, {"series", c.output.series}};
  return j;
}

}  // namespace pvc::cli
