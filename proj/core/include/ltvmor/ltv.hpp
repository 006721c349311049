// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file ltv.hpp
///
/// Continuous-time linear time-varying systems
///
///     dx/dt = A(t) x + B(t) u,   y = C(t) x,   t in [t0, tf]
///
/// with simulation, state-transition matrices, impulse responses, the
/// modified adjoint realization and Petrov-Galerkin projection.
///
/// All integration is classical RK4 stepping node to node.
///
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ltvmor/expr.hpp"
#include "ltvmor/timegrid.hpp"

namespace ltvmor {

class LtvSystem {
 public:
  /// Throws DomainError on grid or dimension mismatch.
  LtvSystem(MatrixTrajectory A, MatrixTrajectory B, MatrixTrajectory C);

  const MatrixTrajectory& A() const noexcept { return A_; }
  const MatrixTrajectory& B() const noexcept { return B_; }
  const MatrixTrajectory& C() const noexcept { return C_; }
  const TimeGrid& grid() const noexcept { return A_.grid(); }

  Index states() const noexcept { return A_.rows(); }
  Index inputs() const noexcept { return B_.cols(); }
  Index outputs() const noexcept { return C_.rows(); }

 private:
  MatrixTrajectory A_;
  MatrixTrajectory B_;
  MatrixTrajectory C_;
};

/// The system restricted to nodes [first, last] of its grid.
LtvSystem restrict(const LtvSystem& sys, std::size_t first, std::size_t last);

/// Vector-valued signal on a grid (inputs, states, outputs).
class SignalTrajectory {
 public:
  explicit SignalTrajectory(MatrixTrajectory values);

  static SignalTrajectory from_samples(const TimeGrid& grid, std::vector<Vector> values);
  static SignalTrajectory from_function(const TimeGrid& grid, Index dim,
                                        std::function<Vector(double)> f);
  static SignalTrajectory constant(const TimeGrid& grid, const Vector& value);

  const TimeGrid& grid() const noexcept { return values_.grid(); }
  Index dim() const noexcept { return values_.rows(); }
  std::size_t size() const noexcept { return values_.size(); }
  Vector value(std::size_t k) const { return values_.sample(k).col(0); }
  Vector eval(double t) const { return values_.eval(t).col(0); }
  Vector at(GridPoint p) const { return values_.at(p).col(0); }
  const MatrixTrajectory& trajectory() const noexcept { return values_; }

 private:
  MatrixTrajectory values_;
};

/// Unit step: u(t) = 1 in every input channel.
SignalTrajectory unit_step(const TimeGrid& grid, Index inputs);

/// L2[t0, tf] norm of a signal by the trapezoidal rule.
double l2_norm(const SignalTrajectory& s);
SignalTrajectory subtract(const SignalTrajectory& a, const SignalTrajectory& b);

enum class ReductionMethod { balanced_truncation, tsia };
std::string to_string(ReductionMethod m);

struct ReducedOrderModel {
  LtvSystem sys;
  MatrixTrajectory Vr;
  MatrixTrajectory Wr;
  ReductionMethod method = ReductionMethod::balanced_truncation;
  std::size_t iterations = 0;
};

/// max over nodes of ||Wr^T Vr - I||_F.
double biorthogonality_defect(const MatrixTrajectory& Vr, const MatrixTrajectory& Wr);

/// Adjoint realization (-A^T, -C^T, B^T), meant to run from tf back to t0.
LtvSystem adjoint(const LtvSystem& sys);

/// Realization (A(Ti - t)^T, C(Ti - t)^T, B(Ti - t)^T) on the same grid.
LtvSystem modified_adjoint(const LtvSystem& sys);

enum class StmSpan {
  forward,  ///< phi(t, tau) for t >= tau; zero before tau
  both,     ///< also integrate backward to fill t < tau
};

/// phi(., tau) by RK4 from phi(tau, tau) = I. tau must be a grid node.
MatrixTrajectory stm(const LtvSystem& sys, double tau, StmSpan span = StmSpan::forward);
MatrixTrajectory stm_from_node(const LtvSystem& sys, std::size_t tau_index,
                               StmSpan span = StmSpan::forward);

/// phi(t, tau) for the state matrix alone, both directions.
MatrixTrajectory stm_from_node(const MatrixTrajectory& A, std::size_t tau_index, StmSpan span);

/// States of dx/dt = A x + B u from x(t0) = x0; u is sampled at RK4 stages
/// through its own evaluation rule.
SignalTrajectory simulate_state(const LtvSystem& sys, const SignalTrajectory& u,
                                const Vector& x0);
/// Output y = C x of simulate_state.
SignalTrajectory simulate(const LtvSystem& sys, const SignalTrajectory& u, const Vector& x0);

/// h(t, tau) = C(t) phi(t, tau) B(tau) for t >= tau, zero before.
MatrixTrajectory impulse_response(const LtvSystem& sys, double tau);
MatrixTrajectory impulse_response_from_node(const LtvSystem& sys, std::size_t tau_index);

enum class ArForm {
  subtract_dV,  ///< A_r = Wr^T (A Vr - dVr/dt)
  add_dW,       ///< A_r = (Wr^T A + d(Wr^T)/dt) Vr
};

/// Petrov-Galerkin reduction with time-varying bases:
/// B_r = Wr^T B, C_r = C Vr and A_r per `form`.
LtvSystem reduce_projection(const LtvSystem& sys, const MatrixTrajectory& Vr,
                            const MatrixTrajectory& Wr, ArForm form = ArForm::subtract_dV);

/// Trajectory whose entries are parsed expressions of t.
using ExprMatrix = std::vector<std::vector<expr::Expr>>;
MatrixTrajectory expression_trajectory(const TimeGrid& grid, const ExprMatrix& entries);

}  // namespace ltvmor
