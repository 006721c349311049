// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file bt.hpp
///
/// Finite-horizon balanced truncation by pointwise square-root balancing.
///
/// At every node, P = R R^T and Q = L L^T are factored through a clamped
/// symmetric eigendecomposition, L^T R = U S V^T is decomposed, and
///
///     Vr = R V1 S1^{-1/2},   Wr = L U1 S1^{-1/2},
///
/// with V1, U1, S1 the leading r singular triplets. Columns are aligned with
/// the previous node so the bases vary continuously in time; the reduced
/// state matrix carries the -Wr^T dVr/dt correction.
///
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ltvmor/dle.hpp"
#include "ltvmor/ltv.hpp"

namespace ltvmor {

/// Time-varying Hankel singular values, sorted descending at every node.
struct HsvTrajectory {
  TimeGrid grid;
  std::vector<Vector> sigma;

  /// sigma_i over all nodes.
  std::vector<double> channel(Index i) const;
};

/// sqrt(eig(P Q)) per node, computed as singular values of L^T R.
/// Throws DomainError if P or Q is indefinite beyond roundoff.
HsvTrajectory hankel_singular_values(const MatrixTrajectory& P, const MatrixTrajectory& Q);

/// cur * Omega with Omega the orthogonal Procrustes rotation maximising
/// Tr((cur Omega)^T prev). For one column this is a sign flip.
Matrix align_subspaces(const Matrix& prev, const Matrix& cur);

struct BtOptions {
  double eps = 1e-3;
  /// Balance only on [first, last] (times must be grid nodes); gramians
  /// still use the whole system grid. The reduced model lives on the window.
  std::optional<std::pair<double, double>> window;
  /// Include -Wr^T dVr/dt in A_r.
  bool derivative_correction = true;
};

ReducedOrderModel balanced_truncation(const LtvSystem& sys, Index r, const BtOptions& options);
ReducedOrderModel balanced_truncation(const LtvSystem& sys, Index r, double eps);

/// Square-root factor R with P = R R^T, negative eigenvalues clamped to 0.
/// Throws DomainError if an eigenvalue is below -1e-10 ||P||.
Matrix psd_factor(const Matrix& P);

}  // namespace ltvmor
