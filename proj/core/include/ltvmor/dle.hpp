// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file dle.hpp
///
/// Differential Lyapunov / Sylvester equations and the gramian-type
/// matrices built from them.
///
/// Forward form:   dX/dt  = F(t) X + X G(t)^T + H(t),   X(t0) = X0
/// Backward form: -dX/dt  = F(t)^T X + X G(t) + H(t),   X(tf) = Xf
///
/// Backward equations are solved by integrating forward in s = Ti - t on
/// reversed coefficients, so both directions share one RK4 path and the
/// reversal is exact on grid nodes.
///
#pragma once

#include "ltvmor/ltv.hpp"
#include "ltvmor/timegrid.hpp"

namespace ltvmor {

enum class Symmetry {
  general,
  symmetric,  ///< symmetrize (X + X^T)/2 after each step
};

MatrixTrajectory solve_forward_sylvester(const MatrixTrajectory& F, const MatrixTrajectory& G,
                                         const MatrixTrajectory& H, const Matrix& X0,
                                         Symmetry symmetry = Symmetry::general);

MatrixTrajectory solve_backward_sylvester(const MatrixTrajectory& F, const MatrixTrajectory& G,
                                          const MatrixTrajectory& H, const Matrix& Xf,
                                          Symmetry symmetry = Symmetry::general);

/// Reachability (P) and observability (Q) gramians.
struct GramianBundle {
  MatrixTrajectory P;
  MatrixTrajectory Q;
  double eps_P = 0.0;
  double eps_Q = 0.0;

  const TimeGrid& grid() const noexcept { return P.grid(); }
};

/// P(t0) = eps_P I forward, Q(tf) = eps_Q I backward.
GramianBundle gramians(const LtvSystem& sys, double eps_P, double eps_Q);

/// Reduced gramians and full/reduced cross terms:
///   Pr, X forward from (eps_r I, 0); Qr, Y backward from (eps_r I, 0).
struct CouplingBundle {
  MatrixTrajectory Pr;
  MatrixTrajectory Qr;
  MatrixTrajectory X;
  MatrixTrajectory Y;
  double eps_r = 0.0;
};

CouplingBundle coupling(const LtvSystem& sys, const LtvSystem& red, double eps_r);

/// Forward-only pieces: X and Pr.
MatrixTrajectory cross_reachability(const LtvSystem& sys, const LtvSystem& red);
MatrixTrajectory reduced_reachability(const LtvSystem& red, double eps_r);

/// X_ma and P_rma solved forward on the modified adjoints of sys and red.
/// On a consistent grid X_ma(t) = Y(Ti - t) and P_rma(t) = Q_r(Ti - t).
struct AdjointCoupling {
  MatrixTrajectory Xma;
  MatrixTrajectory Prma;
};

AdjointCoupling coupling_via_adjoint(const LtvSystem& sys, const LtvSystem& red,
                                     double eps_r = 0.0);

}  // namespace ltvmor
