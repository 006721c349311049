// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace ltvmor::app {

const char* const kTwoStateYaml = R"yaml(# Two-state LTV system, step input, x(0) = 0.
dimensions: {n: 2, m: 1, p: 1}
A:
  - ["t", "2*exp(-t)"]
  - ["1", "t*exp(-t)"]
B:
  - ["1"]
  - ["1"]
C:
  - ["1", "1"]
horizon: [0, 2]
padding: [-0.5, 2.5]
n_steps: 3000
eps: 0.001
eps_r: 0
order: 1
probe: step
tsia:
  max_iterations: 50
  stop_tol: 1.0e-4
  patience: 5
  ar_form: subtract_dV
  delta: absolute
)yaml";

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw ConfigError(origin + ": " + msg);
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key, const std::string& origin) {
  if (!node.IsScalar()) fail(origin, fmt::format("'{}' must be a scalar", key));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(origin, fmt::format("'{}' has invalid value '{}'", key, node.Scalar()));
  }
}

std::size_t count(const YAML::Node& node, const std::string& key, const std::string& origin) {
  const auto v = scalar<long long>(node, key, origin);
  if (v < 0) fail(origin, fmt::format("'{}' must be non-negative", key));
  return static_cast<std::size_t>(v);
}

std::pair<double, double> interval(const YAML::Node& node, const std::string& key,
                                   const std::string& origin) {
  if (!node.IsSequence() || node.size() != 2) {
    fail(origin, fmt::format("'{}' must be a two-element list [start, end]", key));
  }
  return {scalar<double>(node[0], key + "[0]", origin),
          scalar<double>(node[1], key + "[1]", origin)};
}

expr::Expr parse_entry(const std::string& src, const std::string& key, const std::string& origin) {
  try {
    return expr::parse(src);
  } catch (const expr::ParseError& e) {
    fail(origin, fmt::format("{} = \"{}\": {} (position {})", key, src, e.what(), e.position()));
  }
}

void read_matrix(const YAML::Node& root, const char* name, Index rows, Index cols,
                 SourceMatrix& source, ExprMatrix& parsed, const std::string& origin) {
  const YAML::Node node = root[name];
  if (!node) fail(origin, fmt::format("missing key '{}'", name));
  if (!node.IsSequence()) fail(origin, fmt::format("'{}' must be a list of rows", name));
  source.assign(static_cast<std::size_t>(rows), {});
  parsed.assign(static_cast<std::size_t>(rows), {});
  for (Index i = 0; i < rows; ++i) {
    const YAML::Node row = i < static_cast<Index>(node.size()) ? node[static_cast<std::size_t>(i)]
                                                               : YAML::Node();
    if (row && !row.IsSequence()) fail(origin, fmt::format("'{}[{}]' must be a list", name, i));
    for (Index j = 0; j < cols; ++j) {
      const std::string key = fmt::format("{}[{}][{}]", name, i, j);
      if (!row || j >= static_cast<Index>(row.size())) fail(origin, "missing entry " + key);
      const YAML::Node cell = row[static_cast<std::size_t>(j)];
      if (!cell.IsScalar() || cell.Scalar().empty()) fail(origin, "empty entry " + key);
      source[static_cast<std::size_t>(i)].push_back(cell.Scalar());
      parsed[static_cast<std::size_t>(i)].push_back(parse_entry(cell.Scalar(), key, origin));
    }
    if (row && static_cast<Index>(row.size()) > cols) {
      fail(origin, fmt::format("unexpected entry {}[{}][{}] ({} is {}x{})", name, i, cols, name,
                               rows, cols));
    }
  }
  if (static_cast<Index>(node.size()) > rows) {
    fail(origin, fmt::format("unexpected row {}[{}] ({} has {} rows)", name, rows, name, rows));
  }
}

void reject_unknown(const YAML::Node& node, const std::set<std::string>& known,
                    const std::string& where, const std::string& origin) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (known.count(key) == 0) fail(origin, fmt::format("unknown key '{}{}'", where, key));
  }
}

void read_tsia(const YAML::Node& node, TsiaSettings& out, const std::string& origin) {
  if (!node.IsMap()) fail(origin, "'tsia' must be a mapping");
  reject_unknown(node, {"max_iterations", "stop_tol", "patience", "ar_form", "delta"}, "tsia.",
                 origin);
  if (node["max_iterations"]) {
    out.max_iterations = count(node["max_iterations"], "tsia.max_iterations", origin);
  }
  if (node["stop_tol"]) out.stop_tol = scalar<double>(node["stop_tol"], "tsia.stop_tol", origin);
  if (node["patience"]) out.patience = count(node["patience"], "tsia.patience", origin);
  if (node["ar_form"]) {
    const auto v = scalar<std::string>(node["ar_form"], "tsia.ar_form", origin);
    if (v == "subtract_dV") {
      out.ar_form = ArForm::subtract_dV;
    } else if (v == "add_dW") {
      out.ar_form = ArForm::add_dW;
    } else {
      fail(origin, "'tsia.ar_form' must be subtract_dV or add_dW, got '" + v + "'");
    }
  }
  if (node["delta"]) {
    const auto v = scalar<std::string>(node["delta"], "tsia.delta", origin);
    if (v == "absolute") {
      out.delta_measure = DeltaMeasure::absolute;
    } else if (v == "relative") {
      out.delta_measure = DeltaMeasure::relative;
    } else {
      fail(origin, "'tsia.delta' must be absolute or relative, got '" + v + "'");
    }
  }
}

void read_probe(const YAML::Node& node, Index m, ProbeSpec& out, const std::string& origin) {
  if (node.IsScalar()) {
    if (node.Scalar() != "step") fail(origin, "'probe' must be 'step' or {expression: [...]}");
    out.kind = ProbeKind::step;
    return;
  }
  if (!node.IsMap() || !node["expression"]) {
    fail(origin, "'probe' must be 'step' or {expression: [...]}");
  }
  reject_unknown(node, {"expression"}, "probe.", origin);
  const YAML::Node list = node["expression"];
  if (!list.IsSequence() || static_cast<Index>(list.size()) != m) {
    fail(origin, fmt::format("'probe.expression' must list one expression per input (m = {})", m));
  }
  out.kind = ProbeKind::expression;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string key = fmt::format("probe.expression[{}]", i);
    const auto src = scalar<std::string>(list[i], key, origin);
    out.source.push_back(src);
    out.entries.push_back(parse_entry(src, key, origin));
  }
}

void validate_impl(const SystemConfig& c, const std::string& origin) {
  if (c.n < 1 || c.m < 1 || c.p < 1) fail(origin, "dimensions n, m, p must be >= 1");
  if (!(c.tf > c.t0)) fail(origin, fmt::format("horizon [{}, {}] is empty", c.t0, c.tf));
  if (c.padding) {
    const auto [a, b] = *c.padding;
    if (!(a <= c.t0 && b >= c.tf) || !(b > a)) {
      fail(origin, fmt::format("padding [{}, {}] does not contain horizon [{}, {}]", a, b, c.t0,
                               c.tf));
    }
  }
  if (c.eps < 0.0) fail(origin, "'eps' must be >= 0");
  if (c.eps_r < 0.0) fail(origin, "'eps_r' must be >= 0");
  if (c.order < 1 || c.order >= c.n) {
    fail(origin, fmt::format("order r = {} must satisfy 1 <= r < n = {}", c.order, c.n));
  }
  if (c.tsia.max_iterations < 1) fail(origin, "'tsia.max_iterations' must be >= 1");
  if (!(c.tsia.stop_tol > 0.0)) fail(origin, "'tsia.stop_tol' must be > 0");
  if (c.tsia.patience < 1) fail(origin, "'tsia.patience' must be >= 1");
  const auto [a, b] = c.outer();
  const std::size_t steps = c.steps();
  if (steps < 2) fail(origin, "'n_steps' must be >= 2");
  const TimeGrid grid(a, b, steps);
  for (double t : {c.t0, c.tf}) {
    if (!grid.find_node(t)) {
      fail(origin, fmt::format("horizon endpoint {} is not a node of the {}-step grid on [{}, {}]",
                               t, steps, a, b));
    }
  }
  const auto first = *grid.find_node(c.t0);
  const auto last = *grid.find_node(c.tf);
  if (last < first + 2) fail(origin, "horizon spans fewer than 2 grid steps");
}

}  // namespace

std::pair<double, double> SystemConfig::outer() const {
  return padding ? *padding : std::make_pair(t0, tf);
}

std::size_t SystemConfig::steps() const {
  if (n_steps) return *n_steps;
  const auto [a, b] = outer();
  return static_cast<std::size_t>(std::llround(2000.0 * (b - a) / (tf - t0)));
}

SystemConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail(origin, fmt::format("line {}, column {}: {}", e.mark.line + 1, e.mark.column + 1, e.msg));
  }
  if (!root.IsMap()) fail(origin, "top level must be a mapping");
  reject_unknown(root,
                 {"dimensions", "A", "B", "C", "horizon", "padding", "n_steps", "eps", "eps_r",
                  "order", "probe", "tsia"},
                 "", origin);

  SystemConfig c;
  const YAML::Node dims = root["dimensions"];
  if (!dims) fail(origin, "missing key 'dimensions'");
  if (!dims.IsMap()) fail(origin, "'dimensions' must be a mapping {n, m, p}");
  reject_unknown(dims, {"n", "m", "p"}, "dimensions.", origin);
  for (const char* k : {"n", "m", "p"}) {
    if (!dims[k]) fail(origin, fmt::format("missing key 'dimensions.{}'", k));
  }
  c.n = static_cast<Index>(count(dims["n"], "dimensions.n", origin));
  c.m = static_cast<Index>(count(dims["m"], "dimensions.m", origin));
  c.p = static_cast<Index>(count(dims["p"], "dimensions.p", origin));
  if (c.n < 1 || c.m < 1 || c.p < 1) fail(origin, "dimensions n, m, p must be >= 1");

  read_matrix(root, "A", c.n, c.n, c.A_source, c.A, origin);
  read_matrix(root, "B", c.n, c.m, c.B_source, c.B, origin);
  read_matrix(root, "C", c.p, c.n, c.C_source, c.C, origin);

  if (!root["horizon"]) fail(origin, "missing key 'horizon'");
  std::tie(c.t0, c.tf) = interval(root["horizon"], "horizon", origin);
  if (root["padding"]) c.padding = interval(root["padding"], "padding", origin);
  if (root["n_steps"]) c.n_steps = count(root["n_steps"], "n_steps", origin);
  if (root["eps"]) c.eps = scalar<double>(root["eps"], "eps", origin);
  if (root["eps_r"]) c.eps_r = scalar<double>(root["eps_r"], "eps_r", origin);
  if (root["order"]) c.order = static_cast<Index>(count(root["order"], "order", origin));
  if (root["probe"]) read_probe(root["probe"], c.m, c.probe, origin);
  if (root["tsia"]) read_tsia(root["tsia"], c.tsia, origin);

  validate_impl(c, origin);
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const SystemConfig& config) { validate_impl(config, "<config>"); }

SystemConfig two_state_config() {
  return parse_config(kTwoStateYaml, "<two-state example>");
}

Problem build_problem(const SystemConfig& c) {
  validate(c);
  const auto [a, b] = c.outer();
  const TimeGrid grid(a, b, c.steps());
  LtvSystem full(expression_trajectory(grid, c.A), expression_trajectory(grid, c.B),
                 expression_trajectory(grid, c.C));
  const std::size_t first = grid.node_index(c.t0);
  const std::size_t last = grid.node_index(c.tf);
  LtvSystem horizon = (first == 0 && last == grid.n_steps()) ? full : restrict(full, first, last);
  const auto& hgrid = horizon.grid();
  SignalTrajectory probe = [&] {
    if (c.probe.kind == ProbeKind::step) return unit_step(hgrid, c.m);
    const auto entries = c.probe.entries;
    return SignalTrajectory::from_function(hgrid, c.m, [entries](double t) {
      Vector v(static_cast<Index>(entries.size()));
      for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Index>(i)) = entries[i].eval(t);
      return v;
    });
  }();
  return Problem{std::move(full), first, last, std::move(horizon), std::move(probe)};
}

}  // namespace ltvmor::app
