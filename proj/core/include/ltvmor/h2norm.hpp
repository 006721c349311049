// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file h2norm.hpp
///
/// Squared finite-horizon H2 error between a full and a reduced LTV system,
///
///     J = int_{t0}^{tf} int_{t0}^{t} || h(t,tau) - h_r(t,tau) ||_F^2 dtau dt,
///
/// evaluated from reachability data, from observability data, on the
/// modified adjoint pair, and by brute-force double quadrature.
///
#pragma once

#include <cstddef>
#include <optional>

#include "ltvmor/ltv.hpp"
#include "ltvmor/timegrid.hpp"

namespace ltvmor {

/// int Tr(C P C^T - 2 C X Cr^T + Cr Pr Cr^T) dt
double h2_error_sq_reach(const LtvSystem& sys, const LtvSystem& red, const MatrixTrajectory& P,
                         const MatrixTrajectory& X, const MatrixTrajectory& Pr);

/// int Tr(B^T Q B - 2 B^T Y Br + Br^T Qr Br) dt
double h2_error_sq_obs(const LtvSystem& sys, const LtvSystem& red, const MatrixTrajectory& Q,
                       const MatrixTrajectory& Y, const MatrixTrajectory& Qr);

/// Reachability form on the modified adjoint pair; Pma, Xma, Prma are the
/// reachability-type solutions for modified_adjoint(sys), modified_adjoint(red).
double h2_error_sq_adjoint(const LtvSystem& sys, const LtvSystem& red,
                           const MatrixTrajectory& Pma, const MatrixTrajectory& Xma,
                           const MatrixTrajectory& Prma);

/// Double quadrature over impulse-response differences; tau sampled every
/// `tau_stride` nodes (the last node is always included).
double h2_error_bruteforce(const LtvSystem& sys, const LtvSystem& red, std::size_t tau_stride);

struct H2ErrorReport {
  double J_reach = 0.0;
  double J_obs = 0.0;
  double J_adjoint = 0.0;
  std::optional<double> J_bruteforce;
  /// max pairwise |a - b| / (1 + max(|a|, |b|)) over the evaluated values.
  double agreement = 0.0;
};

struct H2ReportOptions {
  double eps = 0.0;
  std::optional<std::size_t> bruteforce_stride;
};

/// Solves every DLE involved and evaluates all three (or four) forms.
H2ErrorReport h2_error_report(const LtvSystem& sys, const LtvSystem& red,
                              const H2ReportOptions& options = {});

}  // namespace ltvmor
