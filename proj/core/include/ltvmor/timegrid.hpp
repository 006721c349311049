// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file timegrid.hpp
///
/// Uniform time grids and matrix-valued trajectories sampled on them.
///
/// Every computation in the library runs on one uniform grid. A trajectory
/// stores one matrix per node and an evaluation rule for off-node times:
/// either piecewise-linear interpolation of the samples, or an analytic
/// function of time whose node values are the stored samples.
///
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace ltvmor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

class TimeGrid {
 public:
  /// Throws DomainError unless tf > t0 and n_steps >= 2.
  TimeGrid(double t0, double tf, std::size_t n_steps);

  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return n_steps_ + 1; }
  double step() const noexcept { return step_; }
  /// Ti = t0 + tf; t -> Ti - t maps node k onto node n_steps - k.
  double reversal_time() const noexcept { return t0_ + tf_; }

  double point(std::size_t k) const noexcept {
    return t0_ + static_cast<double>(k) * step_;
  }
  double midpoint(std::size_t k) const noexcept {
    return t0_ + (static_cast<double>(k) + 0.5) * step_;
  }
  std::size_t reversed_index(std::size_t k) const noexcept { return n_steps_ - k; }

  /// Index of the node at t (within 1e-9 steps), if any.
  std::optional<std::size_t> find_node(double t) const noexcept;
  /// Like find_node but throws DomainError when t is not a node.
  std::size_t node_index(double t) const;

  bool contains(double t) const noexcept;

  /// Sub-grid spanning nodes [first, last] of this grid.
  TimeGrid window(std::size_t first, std::size_t last) const;

  bool operator==(const TimeGrid& other) const noexcept {
    return t0_ == other.t0_ && tf_ == other.tf_ && n_steps_ == other.n_steps_;
  }

 private:
  double t0_;
  double tf_;
  std::size_t n_steps_;
  double step_;
};

TimeGrid make_grid(double t0, double tf, std::size_t n_steps);

/// Position on the grid at which a coefficient is needed: a node, or the
/// midpoint between node `index` and `index + 1`.
struct GridPoint {
  std::size_t index = 0;
  bool half = false;
};

enum class EvalRule { piecewise_linear, analytic };

class MatrixTrajectory {
 public:
  using Function = std::function<Matrix(double)>;

  static MatrixTrajectory from_samples(const TimeGrid& grid, std::vector<Matrix> samples);
  static MatrixTrajectory from_function(const TimeGrid& grid, Index rows, Index cols,
                                        Function f);
  /// Analytic trajectory with precomputed node samples. The samples must be
  /// f at the grid nodes up to rounding; node algebra (reversal, products)
  /// uses them so that node values are reproduced bit-exactly.
  static MatrixTrajectory from_parts(const TimeGrid& grid, std::vector<Matrix> samples,
                                     Function f);
  static MatrixTrajectory constant(const TimeGrid& grid, const Matrix& value);
  static MatrixTrajectory zeros(const TimeGrid& grid, Index rows, Index cols);

  const TimeGrid& grid() const noexcept { return grid_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  EvalRule eval_rule() const noexcept {
    return fn_ ? EvalRule::analytic : EvalRule::piecewise_linear;
  }
  bool is_analytic() const noexcept { return static_cast<bool>(fn_); }

  const Matrix& sample(std::size_t k) const { return (*samples_)[k]; }
  const std::vector<Matrix>& samples() const noexcept { return *samples_; }
  std::size_t size() const noexcept { return samples_->size(); }

  /// Exact sample at nodes; interpolated or analytic in between.
  /// Throws DomainError outside [t0, tf].
  Matrix eval(double t) const;
  Matrix eval_midpoint(std::size_t k) const;
  Matrix at(GridPoint p) const { return p.half ? eval_midpoint(p.index) : sample(p.index); }

  /// The analytic rule, if any.
  const Function* function() const noexcept { return fn_.get(); }

 private:
  MatrixTrajectory(TimeGrid grid, Index rows, Index cols,
                   std::shared_ptr<const std::vector<Matrix>> samples,
                   std::shared_ptr<const Function> fn);

  TimeGrid grid_;
  Index rows_;
  Index cols_;
  std::shared_ptr<const std::vector<Matrix>> samples_;
  std::shared_ptr<const Function> fn_;
};

/// Second-order finite differences: central inside, three-point one-sided at
/// both ends. Needs at least three samples.
MatrixTrajectory differentiate(const MatrixTrajectory& traj);

/// out(t) = in(Ti - t). Analytic rules stay analytic.
MatrixTrajectory reverse(const MatrixTrajectory& traj);

/// Composite trapezoidal rule for a 1x1 trajectory.
double integrate_trapz(const MatrixTrajectory& traj);

/// Trapezoidal rule over per-node scalar values on a grid.
double integrate_trapz(const TimeGrid& grid, const std::vector<double>& values);

MatrixTrajectory transpose(const MatrixTrajectory& traj);
MatrixTrajectory multiply(const MatrixTrajectory& lhs, const MatrixTrajectory& rhs);
MatrixTrajectory add(const MatrixTrajectory& lhs, const MatrixTrajectory& rhs);
MatrixTrajectory scale(const MatrixTrajectory& traj, double factor);

/// Restriction of a trajectory to grid.window(first, last).
MatrixTrajectory restrict(const MatrixTrajectory& traj, std::size_t first, std::size_t last);

/// Applies f to every node sample; the result is piecewise-linear.
MatrixTrajectory map_samples(const MatrixTrajectory& traj,
                             const std::function<Matrix(const Matrix&)>& f);

/// sqrt(integral of ||traj(t)||_F^2 dt) by the trapezoidal rule.
double l2_norm(const MatrixTrajectory& traj);

/// Largest Frobenius-norm difference over nodes. Grids must match.
double max_node_difference(const MatrixTrajectory& a, const MatrixTrajectory& b);

}  // namespace ltvmor
