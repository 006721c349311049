// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ltvmor/ltvmor.hpp"

namespace ltvmor::testing {

inline Matrix random_matrix(std::mt19937& rng, Index rows, Index cols, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

/// A(t) = A0 + A1 sin(w t) with A0 shifted so that its symmetric part is
/// negative definite with margin; B, C smooth and nonzero.
inline LtvSystem random_stable_system(std::mt19937& rng, const TimeGrid& grid, Index n, Index m,
                                      Index p) {
  Matrix A0 = random_matrix(rng, n, n, 0.5);
  const Matrix sym = 0.5 * (A0 + A0.transpose());
  const double top = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().maxCoeff();
  A0 -= (top + 1.0) * Matrix::Identity(n, n);
  const Matrix A1 = random_matrix(rng, n, n, 0.2);
  const Matrix B0 = random_matrix(rng, n, m);
  const Matrix B1 = random_matrix(rng, n, m, 0.3);
  const Matrix C0 = random_matrix(rng, p, n);
  const Matrix C1 = random_matrix(rng, p, n, 0.3);
  std::uniform_real_distribution<double> freq(0.5, 2.0);
  const double w = freq(rng);
  return LtvSystem(
      MatrixTrajectory::from_function(grid, n, n,
                                      [=](double t) { return Matrix(A0 + A1 * std::sin(w * t)); }),
      MatrixTrajectory::from_function(grid, n, m,
                                      [=](double t) { return Matrix(B0 + B1 * std::cos(w * t)); }),
      MatrixTrajectory::from_function(
          grid, p, n, [=](double t) { return Matrix(C0 + C1 * std::sin(0.5 * w * t)); }));
}

/// Smooth reduced model of order r, not derived from any projection.
inline LtvSystem random_reduced_system(std::mt19937& rng, const TimeGrid& grid, Index r, Index m,
                                       Index p) {
  return random_stable_system(rng, grid, r, m, p);
}

/// Composite Simpson rule over node values (even number of intervals).
inline double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  double s = f.front() + f.back();
  for (std::size_t k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f[k];
  return s * h / 3.0;
}

inline Matrix simpson(const std::vector<Matrix>& f, double h) {
  const std::size_t n = f.size() - 1;
  Matrix s = f.front() + f.back();
  for (std::size_t k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f[k];
  return s * h / 3.0;
}

/// phi(t_k, tau_j) for all nodes from the forward STM at t0:
/// phi(t, tau) = phi(t, t0) phi(tau, t0)^{-1}.
struct StmTable {
  std::vector<Matrix> from_t0;
  std::vector<Matrix> inv;

  explicit StmTable(const MatrixTrajectory& A) {
    const auto phi = stm_from_node(A, 0, StmSpan::both);
    for (std::size_t k = 0; k < phi.size(); ++k) {
      from_t0.push_back(phi.sample(k));
      inv.push_back(phi.sample(k).inverse());
    }
  }
  Matrix operator()(std::size_t t, std::size_t tau) const { return from_t0[t] * inv[tau]; }
};

/// P(t_k) = phi P0 phi^T + int_{t0}^{t_k} phi(t,s) B B^T phi(t,s)^T ds, by
/// Simpson over nodes (k must be even).
inline Matrix reachability_by_quadrature(const LtvSystem& sys, const StmTable& phi, std::size_t k,
                                         double eps) {
  const Index n = sys.states();
  std::vector<Matrix> f;
  for (std::size_t j = 0; j <= k; ++j) {
    const Matrix g = phi(k, j) * sys.B().sample(j);
    f.push_back(g * g.transpose());
  }
  const Matrix free = phi(k, 0) * (eps * Matrix::Identity(n, n)) * phi(k, 0).transpose();
  return k == 0 ? free : Matrix(free + simpson(f, sys.grid().step()));
}

/// Q(t_k) = phi(tf,t)^T eps phi(tf,t) + int_{t_k}^{tf} phi(s,t)^T C^T C phi(s,t) ds.
inline Matrix observability_by_quadrature(const LtvSystem& sys, const StmTable& phi,
                                          std::size_t k, double eps) {
  const Index n = sys.states();
  const std::size_t N = sys.grid().n_steps();
  std::vector<Matrix> f;
  for (std::size_t j = k; j <= N; ++j) {
    const Matrix g = sys.C().sample(j) * phi(j, k);
    f.push_back(g.transpose() * g);
  }
  const Matrix free = phi(N, k).transpose() * (eps * Matrix::Identity(n, n)) * phi(N, k);
  return k == N ? free : Matrix(free + simpson(f, sys.grid().step()));
}

/// X(t_k) = int phi(t,s) B Br^T phi_r(t,s)^T ds.
inline Matrix cross_by_quadrature(const LtvSystem& sys, const LtvSystem& red,
                                  const StmTable& phi, const StmTable& phir, std::size_t k) {
  std::vector<Matrix> f;
  for (std::size_t j = 0; j <= k; ++j) {
    f.push_back(phi(k, j) * sys.B().sample(j) * red.B().sample(j).transpose() *
                phir(k, j).transpose());
  }
  return k == 0 ? Matrix::Zero(sys.states(), red.states()) : simpson(f, sys.grid().step());
}

/// Frechet derivative of exp at A*T in direction D*T:
/// int_0^1 e^{A T (1-s)} D T e^{A T s} ds by Simpson with `m` intervals.
inline Matrix expm_frechet_quadrature(const Matrix& A, const Matrix& D, double T, int m = 400) {
  std::vector<Matrix> f;
  for (int i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i) / m;
    const Matrix left = (A * T * (1.0 - s)).exp();
    const Matrix right = (A * T * s).exp();
    f.push_back(left * (D * T) * right);
  }
  return simpson(f, 1.0 / m);
}

inline double rel(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / (1.0 + b.norm());
}

}  // namespace ltvmor::testing
