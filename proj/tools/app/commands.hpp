// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace ltvmor::app {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kDegeneracy = 3,
  kCheckFailed = 4,
};

/// BT initial model on the horizon, balanced with gramians of the outer grid.
ReducedOrderModel reduce_bt(const SystemConfig& config, const Problem& problem);
TsiaOptions tsia_options(const SystemConfig& config, const Problem& problem);

int cmd_simulate(const SystemConfig& config, const std::filesystem::path& out, bool with_states,
                 std::ostream& log);
int cmd_gramians(const SystemConfig& config, const std::filesystem::path& out_dir,
                 std::ostream& log);
int cmd_hsv(const SystemConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_reduce(const SystemConfig& config, ReductionMethod method,
               const std::filesystem::path& out_dir, std::ostream& log);

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

enum class Fault {
  none,
  adjoint_sign,  ///< flip the sign of the adjoint state matrix
};

std::vector<CheckResult> run_checks(const SystemConfig& config, Fault fault = Fault::none);
int cmd_verify(const SystemConfig& config, Fault fault, std::ostream& log);

/// Thresholds enforced by reproduce-paper.
struct PaperThresholds {
  double delta_min = 0.0005;
  double delta_max = 0.003;
  std::size_t best_min = 5;
  std::size_t best_max = 20;
};

struct ExampleSummary {
  double delta_tsia = 0.0;      ///< relative L2 output error of the best iterate
  double delta_tsia_abs = 0.0;
  double delta_bt = 0.0;        ///< relative
  double delta_bt_abs = 0.0;
  std::size_t best_iteration = 0;
  std::size_t iterations_run = 0;
  std::string stop_reason;
  double min_hsv_ratio = 0.0;   ///< min over horizon nodes of sigma_1 / sigma_2
  double max_abs_err_bt = 0.0;
  double max_abs_err_tsia = 0.0;
  double sq_err_bt = 0.0;       ///< int |y - y_r|^2 dt
  double sq_err_tsia = 0.0;
  double seconds = 0.0;
  std::vector<std::string> failures;
};

ExampleSummary reproduce_example(const SystemConfig& config, const std::filesystem::path& out_dir,
                             const PaperThresholds& thresholds = {});
int cmd_reproduce_example(const SystemConfig& config, const std::filesystem::path& out_dir,
                        std::ostream& log);

}  // namespace ltvmor::app
