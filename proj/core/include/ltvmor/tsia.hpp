// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file tsia.hpp
///
/// Finite-horizon two-sided iteration for LTV model reduction.
///
/// Each iteration solves the coupling equations for the current reduced
/// model, forms
///
///     Vr = X Pr^{-1},   Wr = Y Qr^{-1}
///
/// and rebuilds (A_r, B_r, C_r) by Petrov-Galerkin projection. Wr is obtained
/// by forward integration on the modified adjoint pair followed by time
/// reversal. At a fixed point the functional gradients
///
///     dJ/dA_r = 2 (Qr Pr - Y^T X)
///     dJ/dB_r = 2 (Qr Br - Y^T B)
///     dJ/dC_r = 2 (Cr Pr - C X)
///
/// of the squared H2 error vanish.
///
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ltvmor/ltv.hpp"
#include "ltvmor/timegrid.hpp"

namespace ltvmor {

struct GradientBundle {
  MatrixTrajectory dA;  ///< r x r
  MatrixTrajectory dB;  ///< r x m
  MatrixTrajectory dC;  ///< p x r
};

GradientBundle functional_gradients(const MatrixTrajectory& Pr, const MatrixTrajectory& Qr,
                                    const MatrixTrajectory& X, const MatrixTrajectory& Y,
                                    const MatrixTrajectory& B, const MatrixTrajectory& Br,
                                    const MatrixTrajectory& C, const MatrixTrajectory& Cr);

/// Time-integrated Frobenius norms sqrt(int ||.||_F^2 dt).
struct OptimalityResiduals {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

OptimalityResiduals optimality_residuals(const GradientBundle& grads);

/// <grad, delta> = int Tr(grad^T delta) dt by the trapezoidal rule.
double inner_product(const MatrixTrajectory& grad, const MatrixTrajectory& delta);

/// Solution of M S^{-1} node by node, with Tikhonov jitter where S is
/// ill-conditioned.
struct RegularizedSolve {
  MatrixTrajectory value;
  std::vector<std::size_t> jittered_nodes;
};

/// Node whose value is replaced by the one-sided linear limit
/// 2 R(k +- 1) - R(k +- 2). Used where S vanishes by construction, i.e. at the
/// initial node of a gramian started from zero.
enum class BoundaryNode { none, first, last };

/// M(t) S(t)^{-1} for symmetric S. If cond(S) > cond_limit at a node, adds
/// lambda I with lambda = ||S||_2 1e-12, escalating by decades; throws
/// DegeneracyError if that never becomes solvable.
RegularizedSolve right_solve_symmetric(const MatrixTrajectory& M, const MatrixTrajectory& S,
                                       double cond_limit,
                                       BoundaryNode boundary = BoundaryNode::none);

struct Projection {
  MatrixTrajectory Vr;
  MatrixTrajectory Wr;
  std::vector<std::size_t> jittered_nodes;
};

/// Vr = X Pr^{-1}, Wr = Y Qr^{-1}. With `boundary_limits`, Vr at t0 and Wr at
/// tf are one-sided limits (for Pr(t0) = 0, Qr(tf) = 0).
Projection projection_update(const MatrixTrajectory& X, const MatrixTrajectory& Pr,
                             const MatrixTrajectory& Y, const MatrixTrajectory& Qr,
                             double cond_limit = 1e12, bool boundary_limits = false);

/// Wr(t) = Wrma(Ti - t) with Wrma = Xma Prma^{-1} from the modified adjoints.
/// Wr(tf) is the one-sided limit.
RegularizedSolve adjoint_left_basis(const LtvSystem& sys, const LtvSystem& red, double eps_r,
                                    double cond_limit = 1e12);

/// First-order change of phi_r(t, t0) under A_r -> A_r + dAr, from the
/// variational equation d(D)/dt = A_r D + dAr phi_r, D(t0) = 0.
MatrixTrajectory stm_perturbation_first_order(const LtvSystem& red, const MatrixTrajectory& dAr);

enum class DeltaMeasure {
  absolute,  ///< ||y - y_r||_{L2}
  relative,  ///< ||y - y_r||_{L2} / ||y||_{L2}
};

struct TsiaOptions {
  std::size_t max_iterations = 50;
  /// Stop once |delta_k - delta_{k-1}| / max(1, delta_k) < stop_tol.
  double stop_tol = 1e-4;
  /// Stop after this many consecutive increases of delta.
  std::size_t patience = 5;
  /// Initial/terminal value eps_r I of Pr, Qr (and P_rma). X and Y always
  /// start from zero.
  double eps_r = 0.0;
  ArForm ar_form = ArForm::subtract_dV;
  /// Defaults to a unit step.
  std::optional<SignalTrajectory> probe_input;
  /// Measure used by the stopping rule and for best_iteration.
  DeltaMeasure delta_measure = DeltaMeasure::absolute;
  double cond_limit = 1e12;
  /// Wr from the modified adjoint pair (true) or from the backward-solved
  /// Y and Qr (false).
  bool adjoint_path = true;
};

struct TsiaRecord {
  std::size_t iteration = 0;
  double delta = 0.0;           ///< per options.delta_measure
  double delta_absolute = 0.0;
  double delta_relative = 0.0;
  double J = 0.0;               ///< reachability-form H2 error, unregularized
  OptimalityResiduals residuals;
  double biorthogonality = 0.0; ///< max_t ||Wr^T Vr - I||_F of the model's bases
  std::size_t jittered_nodes = 0;
};

enum class StopReason { converged, max_iterations, diverging };
std::string to_string(StopReason reason);

struct TsiaTrace {
  std::vector<TsiaRecord> records;  ///< records[0] is the initial model
  std::size_t best_iteration = 0;
  StopReason reason = StopReason::max_iterations;
};

struct TsiaResult {
  ReducedOrderModel model;  ///< iterate with the smallest delta
  TsiaTrace trace;
};

/// `sys` and `init.sys` must share one grid.
TsiaResult tsia_reduce(const LtvSystem& sys, const ReducedOrderModel& init,
                       const TsiaOptions& options = {});

/// One projection update of `red` (no simulation), as used inside the loop.
ReducedOrderModel tsia_step(const LtvSystem& sys, const LtvSystem& red, const TsiaOptions& options);

}  // namespace ltvmor
