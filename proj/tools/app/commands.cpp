// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "csv.hpp"

namespace ltvmor::app {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> matrix_columns(const std::string& name, Index rows, Index cols) {
  std::vector<std::string> out;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out.push_back(fmt::format("{}_{}_{}", name, i + 1, j + 1));
  }
  return out;
}

void append(std::vector<double>& row, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
  }
}

std::vector<std::string> signal_columns(const std::string& name, Index dim) {
  if (dim == 1) return {name};
  std::vector<std::string> out;
  for (Index i = 0; i < dim; ++i) out.push_back(fmt::format("{}_{}", name, i + 1));
  return out;
}

void write_trajectories(const fs::path& path, const TimeGrid& grid,
                        const std::vector<std::pair<std::string, const MatrixTrajectory*>>& cols) {
  std::vector<std::string> header{"t"};
  for (const auto& [name, traj] : cols) {
    auto names = matrix_columns(name, traj->rows(), traj->cols());
    header.insert(header.end(), names.begin(), names.end());
  }
  CsvWriter csv(path, header);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid.point(k)};
    for (const auto& [name, traj] : cols) append(row, traj->sample(k));
    csv.row(row);
  }
  csv.close();
}

void write_trace(const fs::path& path, const TsiaTrace& trace) {
  CsvWriter csv(path, {"iteration", "delta_abs", "delta_rel", "J", "residual_A", "residual_B",
                       "residual_C", "biorthogonality", "jittered_nodes"});
  for (const auto& r : trace.records) {
    csv.row({static_cast<double>(r.iteration), r.delta_absolute, r.delta_relative, r.J,
             r.residuals.A, r.residuals.B, r.residuals.C, r.biorthogonality,
             static_cast<double>(r.jittered_nodes)});
  }
  csv.close();
}

void write_summary(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [k, v] : kv) out << k << ": " << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

// Euclidean norm of the output error at every node.
std::vector<double> pointwise_error(const SignalTrajectory& y, const SignalTrajectory& yr) {
  std::vector<double> out(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) out[k] = (y.value(k) - yr.value(k)).norm();
  return out;
}

double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / (1.0 + b.norm()); }

double max_rel_diff(const MatrixTrajectory& a, const MatrixTrajectory& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, rel_diff(a.sample(k), b.sample(k)));
  return worst;
}

}  // namespace

ReducedOrderModel reduce_bt(const SystemConfig& config, const Problem& problem) {
  BtOptions options;
  options.eps = config.eps;
  options.window = std::make_pair(config.t0, config.tf);
  return balanced_truncation(problem.full, config.order, options);
}

TsiaOptions tsia_options(const SystemConfig& config, const Problem& problem) {
  TsiaOptions o;
  o.max_iterations = config.tsia.max_iterations;
  o.stop_tol = config.tsia.stop_tol;
  o.patience = config.tsia.patience;
  o.eps_r = config.eps_r;
  o.ar_form = config.tsia.ar_form;
  o.delta_measure = config.tsia.delta_measure;
  o.probe_input = problem.probe;
  return o;
}

int cmd_simulate(const SystemConfig& config, const fs::path& out, bool with_states,
                 std::ostream& log) {
  const auto problem = build_problem(config);
  const auto& sys = problem.horizon;
  const Vector x0 = Vector::Zero(sys.states());
  const auto x = simulate_state(sys, problem.probe, x0);
  const auto y = simulate(sys, problem.probe, x0);

  fs::path path = out;
  if (out.extension() != ".csv") {
    ensure_directory(out);
    path = out / "simulate.csv";
  } else if (out.has_parent_path()) {
    ensure_directory(out.parent_path());
  }
  std::vector<std::string> header{"t"};
  for (Index i = 0; i < sys.outputs(); ++i) header.push_back(fmt::format("y_{}", i + 1));
  if (with_states) {
    for (Index i = 0; i < sys.states(); ++i) header.push_back(fmt::format("x_{}", i + 1));
  }
  CsvWriter csv(path, header);
  const auto& grid = sys.grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid.point(k)};
    append(row, y.value(k));
    if (with_states) append(row, x.value(k));
    csv.row(row);
  }
  csv.close();
  fmt::print(log, "wrote {}\n", path.string());
  return kOk;
}

int cmd_gramians(const SystemConfig& config, const fs::path& out_dir, std::ostream& log) {
  const auto problem = build_problem(config);
  const auto g = gramians(problem.full, config.eps, config.eps);
  ensure_directory(out_dir);
  const auto path = out_dir / "gramians.csv";
  write_trajectories(path, problem.full.grid(), {{"P", &g.P}, {"Q", &g.Q}});
  fmt::print(log, "wrote {}\n", path.string());
  return kOk;
}

int cmd_hsv(const SystemConfig& config, const fs::path& out_dir, std::ostream& log) {
  const auto problem = build_problem(config);
  const auto g = gramians(problem.full, config.eps, config.eps);
  const auto hsv = hankel_singular_values(g.P, g.Q);
  ensure_directory(out_dir);
  const auto path = out_dir / "hsv.csv";
  std::vector<std::string> header{"t"};
  for (Index i = 0; i < config.n; ++i) header.push_back(fmt::format("sigma_{}", i + 1));
  CsvWriter csv(path, header);
  for (std::size_t k = 0; k < hsv.sigma.size(); ++k) {
    std::vector<double> row{hsv.grid.point(k)};
    for (Index i = 0; i < hsv.sigma[k].size(); ++i) row.push_back(hsv.sigma[k](i));
    csv.row(row);
  }
  csv.close();
  fmt::print(log, "wrote {}\n", path.string());
  return kOk;
}

int cmd_reduce(const SystemConfig& config, ReductionMethod method, const fs::path& out_dir,
               std::ostream& log) {
  const auto problem = build_problem(config);
  auto rom = reduce_bt(config, problem);
  std::optional<TsiaTrace> trace;
  if (method == ReductionMethod::tsia) {
    auto result = tsia_reduce(problem.horizon, rom, tsia_options(config, problem));
    rom = std::move(result.model);
    trace = std::move(result.trace);
  }
  ensure_directory(out_dir);
  const auto& grid = rom.sys.grid();
  write_trajectories(out_dir / "reduced.csv", grid,
                     {{"Ar", &rom.sys.A()}, {"Br", &rom.sys.B()}, {"Cr", &rom.sys.C()}});
  write_trajectories(out_dir / "projections.csv", grid, {{"V", &rom.Vr}, {"W", &rom.Wr}});

  const auto y = simulate(problem.horizon, problem.probe, Vector::Zero(config.n));
  const auto yr = simulate(rom.sys, problem.probe, Vector::Zero(config.order));
  const double err = l2_norm(subtract(y, yr));
  const double ynorm = l2_norm(y);
  std::vector<std::pair<std::string, std::string>> summary{
      {"method", to_string(method)},
      {"order", std::to_string(config.order)},
      {"delta_abs", format_number(err)},
      {"delta_rel", format_number(ynorm > 0.0 ? err / ynorm : err)},
      {"biorthogonality", format_number(biorthogonality_defect(rom.Vr, rom.Wr))},
  };
  if (trace) {
    write_trace(out_dir / "trace.csv", *trace);
    summary.emplace_back("best_iteration", std::to_string(trace->best_iteration));
    summary.emplace_back("iterations_run", std::to_string(trace->records.size() - 1));
    summary.emplace_back("stop_reason", to_string(trace->reason));
  }
  write_summary(out_dir / "summary.txt", summary);
  for (const auto& [k, v] : summary) fmt::print(log, "{}: {}\n", k, v);
  return kOk;
}

std::vector<CheckResult> run_checks(const SystemConfig& config, Fault fault) {
  const auto problem = build_problem(config);
  const auto& sys = problem.horizon;
  const auto& grid = sys.grid();
  const std::size_t N = grid.n_steps();
  std::mt19937 rng(20260101u);
  std::vector<CheckResult> out;
  auto record = [&out](std::string name, double residual, double tol) {
    out.push_back(CheckResult{std::move(name), residual, tol, residual <= tol});
  };

  // Adjoint state transition matrices.
  {
    auto adj = adjoint(sys);
    auto ma = modified_adjoint(sys);
    if (fault == Fault::adjoint_sign) {
      adj = LtvSystem(scale(adj.A(), -1.0), adj.B(), adj.C());
      ma = LtvSystem(scale(ma.A(), -1.0), ma.B(), ma.C());
    }
    std::uniform_int_distribution<std::size_t> pick(0, N);
    double worst_a = 0.0;
    double worst_ma = 0.0;
    for (int i = 0; i < 10; ++i) {
      const std::size_t t = pick(rng);
      const std::size_t tau = pick(rng);
      const auto phi_a = stm_from_node(adj.A(), tau, StmSpan::both);
      const auto phi_t = stm_from_node(sys.A(), t, StmSpan::both);
      worst_a = std::max(worst_a, rel_diff(phi_a.sample(t), phi_t.sample(tau).transpose()));
      // phi_ma(t, tau) = phi(Ti - tau, Ti - t)^T
      const auto phi_ma = stm_from_node(ma.A(), tau, StmSpan::both);
      const auto phi_r = stm_from_node(sys.A(), N - t, StmSpan::both);
      worst_ma = std::max(worst_ma, rel_diff(phi_ma.sample(t), phi_r.sample(N - tau).transpose()));
    }
    record("adjoint STM: phi_a(t,tau) = phi(tau,t)^T", worst_a, 1e-6);
    record("modified adjoint STM: phi_ma(t,tau) = phi(Ti-tau,Ti-t)^T", worst_ma, 1e-6);
  }

  // Gramian duality.
  const auto g = gramians(sys, config.eps, config.eps);
  {
    const auto gma = gramians(modified_adjoint(sys), config.eps, config.eps);
    record("gramian duality: P_ma(t) = Q(Ti-t)", max_rel_diff(gma.P, reverse(g.Q)), 1e-6);
    record("gramian duality: Q_ma(t) = P(Ti-t)", max_rel_diff(gma.Q, reverse(g.P)), 1e-6);
  }

  const auto rom = reduce_bt(config, problem);
  record("balanced bases: max ||Wr^T Vr - I||_F", biorthogonality_defect(rom.Vr, rom.Wr), 1e-10);

  // The balanced model can be stiff near the horizon ends when gramians are
  // not padded. The remaining checks use bases frozen at the mid-horizon node,
  // which give a smooth reduced model on the same grid.
  const std::size_t mid = N / 2;
  const LtvSystem red = reduce_projection(sys, MatrixTrajectory::constant(grid, rom.Vr.sample(mid)),
                                          MatrixTrajectory::constant(grid, rom.Wr.sample(mid)));

  // Coupling terms through the modified adjoint.
  {
    const auto c = coupling(sys, red, config.eps);
    const auto a = coupling_via_adjoint(sys, red, config.eps);
    record("coupling: X_ma(t) = Y(Ti-t)", max_rel_diff(a.Xma, reverse(c.Y)), 1e-6);
    record("coupling: P_rma(t) = Q_r(Ti-t)", max_rel_diff(a.Prma, reverse(c.Qr)), 1e-6);
  }

  // Three error-norm expressions and the impulse-response double integral.
  {
    H2ReportOptions opts;
    opts.eps = 0.0;
    opts.bruteforce_stride = std::max<std::size_t>(1, N / 400);
    const auto rep = h2_error_report(sys, red, opts);
    const double scale = 1.0 + std::abs(rep.J_reach);
    const double pair = std::max({std::abs(rep.J_reach - rep.J_obs),
                                  std::abs(rep.J_reach - rep.J_adjoint),
                                  std::abs(rep.J_obs - rep.J_adjoint)}) / scale;
    record("H2 error: reachability, observability and adjoint forms agree", pair, 1e-5);
    record("H2 error: gramian form matches impulse-response integral",
        std::abs(rep.J_reach - *rep.J_bruteforce) / scale, 1e-4);
  }

  // Functional gradients against central differences of J.
  {
    const auto P0 = gramians(sys, 0.0, 0.0).P;
    auto J = [&](const LtvSystem& r) {
      return h2_error_sq_reach(sys, r, P0, cross_reachability(sys, r), reduced_reachability(r, 0.0));
    };
    const auto c = coupling(sys, red, 0.0);
    const auto grads =
        functional_gradients(c.Pr, c.Qr, c.X, c.Y, sys.B(), red.B(), sys.C(), red.C());
    std::normal_distribution<double> normal;
    auto direction = [&](Index rows, Index cols) {
      Matrix a(rows, cols), b(rows, cols);
      for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
          a(i, j) = normal(rng);
          b(i, j) = normal(rng);
        }
      }
      const double t0 = grid.t0();
      const double len = grid.tf() - grid.t0();
      return MatrixTrajectory::from_function(grid, rows, cols, [a, b, t0, len](double t) {
        return Matrix(a + b * std::sin(3.0 * (t - t0) / len));
      });
    };
    const double h = 1e-4;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto dA = direction(red.states(), red.states());
      const auto dB = direction(red.states(), red.inputs());
      const auto dC = direction(red.outputs(), red.states());
      const double ip = inner_product(grads.dA, dA) + inner_product(grads.dB, dB) +
                        inner_product(grads.dC, dC);
      const LtvSystem plus(add(red.A(), scale(dA, h)), add(red.B(), scale(dB, h)),
                           add(red.C(), scale(dC, h)));
      const LtvSystem minus(add(red.A(), scale(dA, -h)), add(red.B(), scale(dB, -h)),
                            add(red.C(), scale(dC, -h)));
      const double fd = (J(plus) - J(minus)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - ip) / std::abs(fd));
    }
    record("gradients: <dJ, D> matches central difference of J", worst, 1e-3);
  }

  // Left projection basis: direct backward solve vs. modified adjoint.
  {
    const auto c = coupling(sys, red, 0.0);
    const auto direct = right_solve_symmetric(c.Y, c.Qr, 1e12, BoundaryNode::last).value;
    const auto via_adjoint = adjoint_left_basis(sys, red, 0.0).value;
    record("left basis: Y Qr^-1 equals time-reversed X_ma P_rma^-1",
        max_rel_diff(via_adjoint, direct), 1e-6);
  }

  // Full-order "reduction": every gradient vanishes.
  {
    const auto c = coupling(sys, sys, 0.0);
    const auto grads =
        functional_gradients(c.Pr, c.Qr, c.X, c.Y, sys.B(), sys.B(), sys.C(), sys.C());
    const auto res = optimality_residuals(grads);
    const double scale = 1.0 + l2_norm(multiply(c.Qr, c.Pr)) + l2_norm(multiply(c.Qr, sys.B())) +
                         l2_norm(multiply(sys.C(), c.Pr));
    record("r = n: gradients vanish", std::max({res.A, res.B, res.C}) / scale, 1e-8);
  }
  return out;
}

int cmd_verify(const SystemConfig& config, Fault fault, std::ostream& log) {
  const auto checks = run_checks(config, fault);
  bool ok = true;
  for (const auto& c : checks) {
    fmt::print(log, "{}  {}  residual={:.3e}  tol={:.0e}\n", c.passed ? "PASS" : "FAIL", c.name,
               c.residual, c.tolerance);
    ok = ok && c.passed;
  }
  return ok ? kOk : kCheckFailed;
}

ExampleSummary reproduce_example(const SystemConfig& config, const fs::path& out_dir,
                             const PaperThresholds& thresholds) {
  const auto start = std::chrono::steady_clock::now();
  const auto problem = build_problem(config);
  ensure_directory(out_dir);
  ExampleSummary s;

  const auto g = gramians(problem.full, config.eps, config.eps);
  const auto hsv = hankel_singular_values(g.P, g.Q);
  {
    std::vector<std::string> header{"t"};
    for (Index i = 0; i < config.n; ++i) header.push_back(fmt::format("sigma_{}", i + 1));
    CsvWriter csv(out_dir / "hsv.csv", header);
    for (std::size_t k = 0; k < hsv.sigma.size(); ++k) {
      std::vector<double> row{hsv.grid.point(k)};
      for (Index i = 0; i < hsv.sigma[k].size(); ++i) row.push_back(hsv.sigma[k](i));
      csv.row(row);
    }
    csv.close();
  }
  s.min_hsv_ratio = std::numeric_limits<double>::infinity();
  if (config.n >= 2) {
    for (std::size_t k = problem.first; k <= problem.last; ++k) {
      s.min_hsv_ratio = std::min(s.min_hsv_ratio, hsv.sigma[k](0) / hsv.sigma[k](1));
    }
  }

  const auto bt = reduce_bt(config, problem);
  const auto result = tsia_reduce(problem.horizon, bt, tsia_options(config, problem));
  write_trace(out_dir / "trace.csv", result.trace);

  const auto& sys = problem.horizon;
  const auto& u = problem.probe;
  const auto y = simulate(sys, u, Vector::Zero(config.n));
  const auto y_bt = simulate(bt.sys, u, Vector::Zero(config.order));
  const auto y_tsia = simulate(result.model.sys, u, Vector::Zero(config.order));
  const auto e_bt = pointwise_error(y, y_bt);
  const auto e_tsia = pointwise_error(y, y_tsia);
  const auto& grid = sys.grid();
  {
    std::vector<std::string> header{"t"};
    for (const char* name : {"y", "y_bt", "y_tsia"}) {
      auto cols = signal_columns(name, config.p);
      header.insert(header.end(), cols.begin(), cols.end());
    }
    CsvWriter csv(out_dir / "outputs.csv", header);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row{grid.point(k)};
      append(row, y.value(k));
      append(row, y_bt.value(k));
      append(row, y_tsia.value(k));
      csv.row(row);
    }
    csv.close();
    CsvWriter err(out_dir / "abs_errors.csv", {"t", "abs_err_bt", "abs_err_tsia"});
    for (std::size_t k = 0; k < grid.size(); ++k) err.row({grid.point(k), e_bt[k], e_tsia[k]});
    err.close();
  }

  const auto& best = result.trace.records[result.trace.best_iteration];
  s.delta_tsia_abs = best.delta_absolute;
  s.delta_tsia = best.delta_relative;
  s.delta_bt_abs = result.trace.records.front().delta_absolute;
  s.delta_bt = result.trace.records.front().delta_relative;
  s.best_iteration = result.trace.best_iteration;
  s.iterations_run = result.trace.records.size() - 1;
  s.stop_reason = to_string(result.trace.reason);
  s.max_abs_err_bt = *std::max_element(e_bt.begin(), e_bt.end());
  s.max_abs_err_tsia = *std::max_element(e_tsia.begin(), e_tsia.end());
  std::vector<double> sq_bt(e_bt.size()), sq_tsia(e_tsia.size());
  for (std::size_t k = 0; k < e_bt.size(); ++k) {
    sq_bt[k] = e_bt[k] * e_bt[k];
    sq_tsia[k] = e_tsia[k] * e_tsia[k];
  }
  s.sq_err_bt = integrate_trapz(grid, sq_bt);
  s.sq_err_tsia = integrate_trapz(grid, sq_tsia);

  if (!(s.delta_tsia >= thresholds.delta_min && s.delta_tsia <= thresholds.delta_max)) {
    s.failures.push_back(fmt::format("delta_tsia {:.6g} outside [{}, {}]", s.delta_tsia,
                                     thresholds.delta_min, thresholds.delta_max));
  }
  if (s.best_iteration < thresholds.best_min || s.best_iteration > thresholds.best_max) {
    s.failures.push_back(fmt::format("best iteration {} outside [{}, {}]", s.best_iteration,
                                     thresholds.best_min, thresholds.best_max));
  }
  if (!(s.min_hsv_ratio > 1.0)) {
    s.failures.push_back(fmt::format("sigma_1/sigma_2 reaches {:.6g} on the horizon",
                                     s.min_hsv_ratio));
  }
  if (!(s.max_abs_err_tsia < s.max_abs_err_bt)) {
    s.failures.push_back("max |y - y_tsia| is not below max |y - y_bt|");
  }
  if (!(s.sq_err_tsia < s.sq_err_bt)) {
    s.failures.push_back("int |y - y_tsia|^2 is not below int |y - y_bt|^2");
  }

  write_summary(out_dir / "summary.txt",
                {{"delta_tsia", format_number(s.delta_tsia)},
                 {"delta_tsia_abs", format_number(s.delta_tsia_abs)},
                 {"best_iteration", std::to_string(s.best_iteration)},
                 {"delta_bt", format_number(s.delta_bt)},
                 {"delta_bt_abs", format_number(s.delta_bt_abs)},
                 {"iterations_run", std::to_string(s.iterations_run)},
                 {"stop_reason", s.stop_reason},
                 {"min_hsv_ratio", format_number(s.min_hsv_ratio)},
                 {"max_abs_err_bt", format_number(s.max_abs_err_bt)},
                 {"max_abs_err_tsia", format_number(s.max_abs_err_tsia)},
                 {"sq_err_bt", format_number(s.sq_err_bt)},
                 {"sq_err_tsia", format_number(s.sq_err_tsia)},
                 {"status", s.failures.empty() ? "pass" : "fail"}});
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

int cmd_reproduce_example(const SystemConfig& config, const fs::path& out_dir, std::ostream& log) {
  const auto s = reproduce_example(config, out_dir);
  fmt::print(log, "delta_tsia (relative)  {:.6g}  at iteration {}\n", s.delta_tsia,
             s.best_iteration);
  fmt::print(log, "delta_bt (relative)    {:.6g}\n", s.delta_bt);
  fmt::print(log, "delta_tsia (absolute)  {:.6g}\n", s.delta_tsia_abs);
  fmt::print(log, "iterations run         {} ({})\n", s.iterations_run, s.stop_reason);
  fmt::print(log, "min sigma_1/sigma_2    {:.6g}\n", s.min_hsv_ratio);
  fmt::print(log, "max |e| bt / tsia      {:.6g} / {:.6g}\n", s.max_abs_err_bt, s.max_abs_err_tsia);
  fmt::print(log, "int e^2 bt / tsia      {:.6g} / {:.6g}\n", s.sq_err_bt, s.sq_err_tsia);
  fmt::print(log, "elapsed                {:.2f} s\n", s.seconds);
  fmt::print(log, "outputs in {}\n", out_dir.string());
  for (const auto& f : s.failures) fmt::print(log, "FAIL {}\n", f);
  return s.failures.empty() ? kOk : kCheckFailed;
}

}  // namespace ltvmor::app
