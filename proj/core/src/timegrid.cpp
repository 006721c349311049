// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/timegrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltvmor/errors.hpp"

namespace ltvmor {
namespace {

constexpr double kNodeTolerance = 1e-9;  // in units of the step

void require_same_grid(const MatrixTrajectory& a, const MatrixTrajectory& b, const char* op) {
  if (!(a.grid() == b.grid())) {
    throw DomainError(std::string(op) + ": trajectories live on different grids");
  }
}

}  // namespace

TimeGrid::TimeGrid(double t0, double tf, std::size_t n_steps)
    : t0_(t0), tf_(tf), n_steps_(n_steps), step_(0.0) {
  if (!(std::isfinite(t0) && std::isfinite(tf)) || !(tf > t0)) {
    std::ostringstream os;
    os << "time grid needs tf > t0 (got t0 = " << t0 << ", tf = " << tf << ")";
    throw DomainError(os.str());
  }
  if (n_steps < 2) {
    throw DomainError("time grid needs at least 2 steps");
  }
  step_ = (tf - t0) / static_cast<double>(n_steps);
}

std::optional<std::size_t> TimeGrid::find_node(double t) const noexcept {
  const double pos = (t - t0_) / step_;
  const double nearest = std::round(pos);
  if (nearest < 0.0 || nearest > static_cast<double>(n_steps_)) return std::nullopt;
  if (std::abs(pos - nearest) > kNodeTolerance) return std::nullopt;
  return static_cast<std::size_t>(nearest);
}

std::size_t TimeGrid::node_index(double t) const {
  if (auto k = find_node(t)) return *k;
  std::ostringstream os;
  os << "t = " << t << " is not a node of the grid [" << t0_ << ", " << tf_ << "] with "
     << n_steps_ << " steps";
  throw DomainError(os.str());
}

bool TimeGrid::contains(double t) const noexcept {
  const double slack = kNodeTolerance * step_;
  return t >= t0_ - slack && t <= tf_ + slack;
}

TimeGrid TimeGrid::window(std::size_t first, std::size_t last) const {
  if (last > n_steps_ || last < first + 2) {
    throw DomainError("grid window must span at least 2 steps inside the parent grid");
  }
  return TimeGrid(point(first), point(last), last - first);
}

TimeGrid make_grid(double t0, double tf, std::size_t n_steps) {
  return TimeGrid(t0, tf, n_steps);
}

// --- MatrixTrajectory -------------------------------------------------------

MatrixTrajectory::MatrixTrajectory(TimeGrid grid, Index rows, Index cols,
                                   std::shared_ptr<const std::vector<Matrix>> samples,
                                   std::shared_ptr<const Function> fn)
    : grid_(grid), rows_(rows), cols_(cols), samples_(std::move(samples)), fn_(std::move(fn)) {}

MatrixTrajectory MatrixTrajectory::from_samples(const TimeGrid& grid,
                                                std::vector<Matrix> samples) {
  if (samples.size() != grid.size()) {
    throw DomainError("trajectory needs exactly n_steps + 1 samples");
  }
  const Index rows = samples.front().rows();
  const Index cols = samples.front().cols();
  for (const auto& s : samples) {
    if (s.rows() != rows || s.cols() != cols) {
      throw DomainError("trajectory samples must share one shape");
    }
  }
  return MatrixTrajectory(grid, rows, cols,
                          std::make_shared<const std::vector<Matrix>>(std::move(samples)),
                          nullptr);
}

MatrixTrajectory MatrixTrajectory::from_function(const TimeGrid& grid, Index rows, Index cols,
                                                 Function f) {
  std::vector<Matrix> samples;
  samples.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Matrix value = f(grid.point(k));
    if (value.rows() != rows || value.cols() != cols) {
      throw DomainError("analytic trajectory returned a matrix of the wrong shape");
    }
    samples.push_back(std::move(value));
  }
  return MatrixTrajectory(grid, rows, cols,
                          std::make_shared<const std::vector<Matrix>>(std::move(samples)),
                          std::make_shared<const Function>(std::move(f)));
}

MatrixTrajectory MatrixTrajectory::from_parts(const TimeGrid& grid, std::vector<Matrix> samples,
                                              Function f) {
  auto sampled = from_samples(grid, std::move(samples));
  sampled.fn_ = std::make_shared<const Function>(std::move(f));
  return sampled;
}

MatrixTrajectory MatrixTrajectory::constant(const TimeGrid& grid, const Matrix& value) {
  return from_function(grid, value.rows(), value.cols(), [value](double) { return value; });
}

MatrixTrajectory MatrixTrajectory::zeros(const TimeGrid& grid, Index rows, Index cols) {
  return constant(grid, Matrix::Zero(rows, cols));
}

Matrix MatrixTrajectory::eval(double t) const {
  if (!grid_.contains(t)) {
    std::ostringstream os;
    os << "t = " << t << " outside trajectory range [" << grid_.t0() << ", " << grid_.tf()
       << "]";
    throw DomainError(os.str());
  }
  if (auto k = grid_.find_node(t)) return sample(*k);
  if (fn_) return (*fn_)(t);
  const double pos = (t - grid_.t0()) / grid_.step();
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, std::floor(pos))),
                                       grid_.n_steps() - 1);
  const double frac = pos - static_cast<double>(k);
  return (1.0 - frac) * sample(k) + frac * sample(k + 1);
}

Matrix MatrixTrajectory::eval_midpoint(std::size_t k) const {
  if (fn_) return (*fn_)(grid_.midpoint(k));
  return 0.5 * (sample(k) + sample(k + 1));
}

// --- free functions ----------------------------------------------------------

MatrixTrajectory differentiate(const MatrixTrajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 3) throw DomainError("differentiate needs at least 3 samples");
  const double inv2h = 1.0 / (2.0 * traj.grid().step());
  std::vector<Matrix> out(n);
  const auto& s = traj.samples();
  out[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) * inv2h;
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (s[k + 1] - s[k - 1]) * inv2h;
  out[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) * inv2h;
  return MatrixTrajectory::from_samples(traj.grid(), std::move(out));
}

namespace {

// Node samples from `node_op` on the operands' samples; the analytic rule
// (when every operand has one) from `fn`.
template <class NodeOp>
std::vector<Matrix> node_samples(std::size_t n, NodeOp&& node_op) {
  std::vector<Matrix> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = node_op(k);
  return out;
}

}  // namespace

MatrixTrajectory reverse(const MatrixTrajectory& traj) {
  const auto& grid = traj.grid();
  const std::size_t n = traj.size();
  auto samples = node_samples(n, [&](std::size_t k) { return traj.sample(n - 1 - k); });
  if (const auto* f = traj.function()) {
    const double ti = grid.reversal_time();
    return MatrixTrajectory::from_parts(grid, std::move(samples),
                                        [f = *f, ti](double t) { return f(ti - t); });
  }
  return MatrixTrajectory::from_samples(grid, std::move(samples));
}

double integrate_trapz(const TimeGrid& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) throw DomainError("integrate_trapz: size mismatch");
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) sum += values[k];
  return sum * grid.step();
}

double integrate_trapz(const MatrixTrajectory& traj) {
  if (traj.rows() != 1 || traj.cols() != 1) {
    throw DomainError("integrate_trapz expects a scalar (1x1) trajectory");
  }
  std::vector<double> values(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) values[k] = traj.sample(k)(0, 0);
  return integrate_trapz(traj.grid(), values);
}

MatrixTrajectory transpose(const MatrixTrajectory& traj) {
  auto samples =
      node_samples(traj.size(), [&](std::size_t k) -> Matrix { return traj.sample(k).transpose(); });
  if (const auto* f = traj.function()) {
    return MatrixTrajectory::from_parts(traj.grid(), std::move(samples),
                                        [f = *f](double t) -> Matrix { return f(t).transpose(); });
  }
  return MatrixTrajectory::from_samples(traj.grid(), std::move(samples));
}

MatrixTrajectory multiply(const MatrixTrajectory& lhs, const MatrixTrajectory& rhs) {
  require_same_grid(lhs, rhs, "multiply");
  if (lhs.cols() != rhs.rows()) throw DomainError("multiply: inner dimensions differ");
  auto samples =
      node_samples(lhs.size(), [&](std::size_t k) -> Matrix { return lhs.sample(k) * rhs.sample(k); });
  if (lhs.is_analytic() && rhs.is_analytic()) {
    return MatrixTrajectory::from_parts(
        lhs.grid(), std::move(samples),
        [f = *lhs.function(), g = *rhs.function()](double t) -> Matrix { return f(t) * g(t); });
  }
  return MatrixTrajectory::from_samples(lhs.grid(), std::move(samples));
}

MatrixTrajectory add(const MatrixTrajectory& lhs, const MatrixTrajectory& rhs) {
  require_same_grid(lhs, rhs, "add");
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw DomainError("add: shapes differ");
  }
  auto samples =
      node_samples(lhs.size(), [&](std::size_t k) -> Matrix { return lhs.sample(k) + rhs.sample(k); });
  if (lhs.is_analytic() && rhs.is_analytic()) {
    return MatrixTrajectory::from_parts(
        lhs.grid(), std::move(samples),
        [f = *lhs.function(), g = *rhs.function()](double t) -> Matrix { return f(t) + g(t); });
  }
  return MatrixTrajectory::from_samples(lhs.grid(), std::move(samples));
}

MatrixTrajectory scale(const MatrixTrajectory& traj, double factor) {
  auto samples =
      node_samples(traj.size(), [&](std::size_t k) -> Matrix { return factor * traj.sample(k); });
  if (const auto* f = traj.function()) {
    return MatrixTrajectory::from_parts(traj.grid(), std::move(samples),
                                        [f = *f, factor](double t) -> Matrix { return factor * f(t); });
  }
  return MatrixTrajectory::from_samples(traj.grid(), std::move(samples));
}

MatrixTrajectory restrict(const MatrixTrajectory& traj, std::size_t first, std::size_t last) {
  const TimeGrid sub = traj.grid().window(first, last);
  std::vector<Matrix> samples(traj.samples().begin() + static_cast<std::ptrdiff_t>(first),
                              traj.samples().begin() + static_cast<std::ptrdiff_t>(last) + 1);
  if (const auto* f = traj.function()) {
    return MatrixTrajectory::from_parts(sub, std::move(samples), *f);
  }
  return MatrixTrajectory::from_samples(sub, std::move(samples));
}

MatrixTrajectory map_samples(const MatrixTrajectory& traj,
                             const std::function<Matrix(const Matrix&)>& f) {
  std::vector<Matrix> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) out[k] = f(traj.sample(k));
  return MatrixTrajectory::from_samples(traj.grid(), std::move(out));
}

double l2_norm(const MatrixTrajectory& traj) {
  std::vector<double> values(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) values[k] = traj.sample(k).squaredNorm();
  return std::sqrt(std::max(0.0, integrate_trapz(traj.grid(), values)));
}

double max_node_difference(const MatrixTrajectory& a, const MatrixTrajectory& b) {
  if (a.size() != b.size() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError("max_node_difference: shapes differ");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, (a.sample(k) - b.sample(k)).norm());
  }
  return worst;
}

}  // namespace ltvmor
