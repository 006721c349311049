// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ltvmor/ltvmor.hpp"

namespace ltvmor::app {

/// Invalid or incomplete configuration. The message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProbeKind { step, expression };

struct ProbeSpec {
  ProbeKind kind = ProbeKind::step;
  std::vector<std::string> source;  ///< one expression per input (expression kind)
  std::vector<expr::Expr> entries;
};

struct TsiaSettings {
  std::size_t max_iterations = 50;
  double stop_tol = 1e-4;
  std::size_t patience = 5;
  ArForm ar_form = ArForm::subtract_dV;
  DeltaMeasure delta_measure = DeltaMeasure::absolute;
};

using SourceMatrix = std::vector<std::vector<std::string>>;

struct SystemConfig {
  Index n = 0;
  Index m = 0;
  Index p = 0;
  SourceMatrix A_source, B_source, C_source;
  ExprMatrix A, B, C;
  double t0 = 0.0;
  double tf = 1.0;
  /// Wider horizon for gramians (HSV, balancing).
  std::optional<std::pair<double, double>> padding;
  /// Intervals of the outer grid (padding when present, else horizon).
  /// Absent: 2000 per horizon length, scaled to the outer grid.
  std::optional<std::size_t> n_steps;
  double eps = 1e-3;
  double eps_r = 0.0;
  Index order = 1;
  ProbeSpec probe;
  TsiaSettings tsia;

  std::pair<double, double> outer() const;
  std::size_t steps() const;
};

/// Parse and fully validate a YAML document. `origin` prefixes messages.
SystemConfig parse_config(const std::string& text, const std::string& origin = "<config>");
SystemConfig load_config(const std::string& path);

/// Re-check cross-field constraints, e.g. after command-line overrides.
void validate(const SystemConfig& config);

/// The two-state example system shipped as configs/two_state.yaml.
extern const char* const kTwoStateYaml;
SystemConfig two_state_config();

/// The configured system on the outer grid and restricted to the horizon.
struct Problem {
  LtvSystem full;
  std::size_t first = 0;  ///< horizon start node on the outer grid
  std::size_t last = 0;   ///< horizon end node on the outer grid
  LtvSystem horizon;
  SignalTrajectory probe;  ///< on the horizon grid
};

Problem build_problem(const SystemConfig& config);

}  // namespace ltvmor::app
