// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/bt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ltvmor/errors.hpp"

namespace ltvmor {
namespace {

constexpr double kPsdTolerance = 1e-10;
constexpr double kCoalescence = 1e-8;

struct NodeBalance {
  Matrix Vr;
  Matrix Wr;
  Vector sigma;
};

// Groups of adjacent selected columns whose singular values coalesce.
std::vector<std::pair<Index, Index>> clusters(const Vector& s, Index r) {
  std::vector<std::pair<Index, Index>> out;
  Index start = 0;
  for (Index j = 1; j <= r; ++j) {
    if (j == r || s(j - 1) - s(j) >= kCoalescence * s(0)) {
      out.emplace_back(start, j);
      start = j;
    }
  }
  return out;
}

}  // namespace

std::vector<double> HsvTrajectory::channel(Index i) const {
  std::vector<double> out(sigma.size());
  for (std::size_t k = 0; k < sigma.size(); ++k) out[k] = sigma[k](i);
  return out;
}

Matrix psd_factor(const Matrix& P) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (P + P.transpose()));
  const Vector& lambda = eig.eigenvalues();
  const double scale = std::max(std::abs(lambda.maxCoeff()), std::abs(lambda.minCoeff()));
  if (lambda.minCoeff() < -kPsdTolerance * scale) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite (smallest eigenvalue " << lambda.minCoeff()
       << ")";
    throw DomainError(os.str());
  }
  const Vector root = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

HsvTrajectory hankel_singular_values(const MatrixTrajectory& P, const MatrixTrajectory& Q) {
  if (!(P.grid() == Q.grid()) || P.rows() != Q.rows() || P.rows() != P.cols() ||
      Q.rows() != Q.cols()) {
    throw DomainError("hankel_singular_values: P and Q must be square, same size, same grid");
  }
  HsvTrajectory out{P.grid(), {}};
  out.sigma.reserve(P.size());
  for (std::size_t k = 0; k < P.size(); ++k) {
    const Matrix R = psd_factor(P.sample(k));
    const Matrix L = psd_factor(Q.sample(k));
    Eigen::JacobiSVD<Matrix> svd(L.transpose() * R);
    out.sigma.push_back(svd.singularValues());  // already descending
  }
  return out;
}

Matrix align_subspaces(const Matrix& prev, const Matrix& cur) {
  if (prev.rows() != cur.rows() || prev.cols() != cur.cols()) {
    throw DomainError("align_subspaces: shapes differ");
  }
  Eigen::JacobiSVD<Matrix> svd(cur.transpose() * prev, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix omega = svd.matrixU() * svd.matrixV().transpose();
  return cur * omega;
}

namespace {

NodeBalance balance_node(const Matrix& P, const Matrix& Q, Index r, const NodeBalance* prev,
                         std::size_t node, double time) {
  const Matrix R = psd_factor(P);
  const Matrix L = psd_factor(Q);
  Eigen::JacobiSVD<Matrix> svd(L.transpose() * R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const Index n = s.size();

  if (!(s(r - 1) > 1e-14 * std::max(s(0), 1e-300))) {
    std::ostringstream os;
    os << "balanced truncation: singular value sigma_" << r << " = " << s(r - 1)
       << " is numerically zero";
    throw DegeneracyError(os.str(), node, time);
  }

  // Column order: leading r, except that a trailing selected column whose
  // singular value coalesces with unselected ones keeps the previous choice.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  if (prev != nullptr && r < n && s(r - 1) - s(r) < kCoalescence * s(0)) {
    const Vector prev_col = prev->Vr.col(r - 1);
    Index best = r - 1;
    double best_score = -1.0;
    for (Index j = r - 1; j < n && s(r - 1) - s(j) < kCoalescence * s(0); ++j) {
      const Vector cand = R * svd.matrixV().col(j) / std::sqrt(s(j));
      const double score = std::abs(cand.dot(prev_col)) / std::max(cand.norm(), 1e-300);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    std::swap(order[static_cast<std::size_t>(r - 1)], order[static_cast<std::size_t>(best)]);
  }

  NodeBalance out{Matrix(R.rows(), r), Matrix(L.rows(), r), s};
  for (Index j = 0; j < r; ++j) {
    const Index c = order[static_cast<std::size_t>(j)];
    const double inv_sqrt = 1.0 / std::sqrt(s(c));
    out.Vr.col(j) = R * svd.matrixV().col(c) * inv_sqrt;
    out.Wr.col(j) = L * svd.matrixU().col(c) * inv_sqrt;
  }

  if (prev != nullptr) {
    // Rotate within each group of coalescing columns (sign flips for
    // isolated ones); apply the same rotation to Wr to keep Wr^T Vr = I.
    for (auto [lo, hi] : clusters(s, r)) {
      const Index w = hi - lo;
      const Matrix cur = out.Vr.middleCols(lo, w);
      Eigen::JacobiSVD<Matrix> align(cur.transpose() * prev->Vr.middleCols(lo, w),
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Matrix omega = align.matrixU() * align.matrixV().transpose();
      out.Vr.middleCols(lo, w) = cur * omega;
      out.Wr.middleCols(lo, w) = out.Wr.middleCols(lo, w) * omega;
    }
  }
  return out;
}

}  // namespace

ReducedOrderModel balanced_truncation(const LtvSystem& sys, Index r, const BtOptions& options) {
  if (r < 1 || r > sys.states()) {
    std::ostringstream os;
    os << "balanced truncation: order " << r << " must satisfy 1 <= r <= n = " << sys.states();
    throw DomainError(os.str());
  }
  const auto& grid = sys.grid();
  std::size_t first = 0;
  std::size_t last = grid.n_steps();
  if (options.window) {
    first = grid.node_index(options.window->first);
    last = grid.node_index(options.window->second);
    if (last < first + 2) throw DomainError("balanced truncation: window too short");
  }

  const auto g = gramians(sys, options.eps, options.eps);
  std::vector<Matrix> vr, wr;
  vr.reserve(last - first + 1);
  wr.reserve(last - first + 1);
  std::optional<NodeBalance> prev;
  for (std::size_t k = first; k <= last; ++k) {
    auto node = balance_node(g.P.sample(k), g.Q.sample(k), r, prev ? &*prev : nullptr, k,
                             grid.point(k));
    vr.push_back(node.Vr);
    wr.push_back(node.Wr);
    prev = std::move(node);
  }

  const auto window_sys = (first == 0 && last == grid.n_steps()) ? sys : restrict(sys, first, last);
  const auto& wgrid = window_sys.grid();
  auto Vr = MatrixTrajectory::from_samples(wgrid, std::move(vr));
  auto Wr = MatrixTrajectory::from_samples(wgrid, std::move(wr));

  if (options.derivative_correction) {
    auto red = reduce_projection(window_sys, Vr, Wr, ArForm::subtract_dV);
    return ReducedOrderModel{std::move(red), std::move(Vr), std::move(Wr),
                             ReductionMethod::balanced_truncation, 0};
  }
  std::vector<Matrix> ar(wgrid.size());
  for (std::size_t k = 0; k < wgrid.size(); ++k) {
    ar[k] = Wr.sample(k).transpose() * window_sys.A().sample(k) * Vr.sample(k);
  }
  const auto plain = reduce_projection(window_sys, Vr, Wr, ArForm::subtract_dV);
  LtvSystem red(MatrixTrajectory::from_samples(wgrid, std::move(ar)), plain.B(), plain.C());
  return ReducedOrderModel{std::move(red), std::move(Vr), std::move(Wr),
                           ReductionMethod::balanced_truncation, 0};
}

ReducedOrderModel balanced_truncation(const LtvSystem& sys, Index r, double eps) {
  BtOptions options;
  options.eps = eps;
  return balanced_truncation(sys, r, options);
}

}  // namespace ltvmor
