// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/tsia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ltvmor/dle.hpp"
#include "ltvmor/errors.hpp"
#include "ltvmor/h2norm.hpp"
#include "rk4.hpp"

namespace ltvmor {

GradientBundle functional_gradients(const MatrixTrajectory& Pr, const MatrixTrajectory& Qr,
                                    const MatrixTrajectory& X, const MatrixTrajectory& Y,
                                    const MatrixTrajectory& B, const MatrixTrajectory& Br,
                                    const MatrixTrajectory& C, const MatrixTrajectory& Cr) {
  const Index r = Pr.rows();
  const bool ok = Pr.cols() == r && Qr.rows() == r && Qr.cols() == r && X.cols() == r &&
                  Y.cols() == r && X.rows() == Y.rows() && B.rows() == X.rows() &&
                  Br.rows() == r && Br.cols() == B.cols() && C.cols() == X.rows() &&
                  Cr.cols() == r && Cr.rows() == C.rows();
  if (!ok) throw DomainError("functional_gradients: inconsistent dimensions");
  const auto& g = Pr.grid();
  for (const auto* m : {&Qr, &X, &Y, &B, &Br, &C, &Cr}) {
    if (!(m->grid() == g)) throw DomainError("functional_gradients: grids differ");
  }
  const std::size_t n = g.size();
  std::vector<Matrix> dA(n), dB(n), dC(n);
  for (std::size_t k = 0; k < n; ++k) {
    dA[k] = 2.0 * (Qr.sample(k) * Pr.sample(k) - Y.sample(k).transpose() * X.sample(k));
    dB[k] = 2.0 * (Qr.sample(k) * Br.sample(k) - Y.sample(k).transpose() * B.sample(k));
    dC[k] = 2.0 * (Cr.sample(k) * Pr.sample(k) - C.sample(k) * X.sample(k));
  }
  return GradientBundle{MatrixTrajectory::from_samples(g, std::move(dA)),
                        MatrixTrajectory::from_samples(g, std::move(dB)),
                        MatrixTrajectory::from_samples(g, std::move(dC))};
}

OptimalityResiduals optimality_residuals(const GradientBundle& grads) {
  return OptimalityResiduals{l2_norm(grads.dA), l2_norm(grads.dB), l2_norm(grads.dC)};
}

double inner_product(const MatrixTrajectory& grad, const MatrixTrajectory& delta) {
  if (!(grad.grid() == delta.grid()) || grad.rows() != delta.rows() ||
      grad.cols() != delta.cols()) {
    throw DomainError("inner_product: shapes or grids differ");
  }
  std::vector<double> values(grad.size());
  for (std::size_t k = 0; k < grad.size(); ++k) {
    values[k] = grad.sample(k).cwiseProduct(delta.sample(k)).sum();
  }
  return integrate_trapz(grad.grid(), values);
}

RegularizedSolve right_solve_symmetric(const MatrixTrajectory& M, const MatrixTrajectory& S,
                                       double cond_limit, BoundaryNode boundary) {
  if (!(M.grid() == S.grid()) || S.rows() != S.cols() || M.cols() != S.rows()) {
    throw DomainError("right_solve_symmetric: shapes or grids differ");
  }
  const auto& grid = S.grid();
  const Index r = S.rows();
  std::vector<Matrix> out(grid.size());
  std::vector<std::size_t> jittered;
  const std::size_t last = grid.n_steps();
  const std::size_t skip = boundary == BoundaryNode::first ? 0
                           : boundary == BoundaryNode::last ? last
                                                            : grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k == skip) continue;
    const Matrix s = 0.5 * (S.sample(k) + S.sample(k).transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    auto cond = [&](double shift) {
      const double lo = lmin + shift;
      return lo > 0.0 ? (lmax + shift) / lo : std::numeric_limits<double>::infinity();
    };
    double shift = 0.0;
    if (cond(0.0) > cond_limit) {
      if (!(lmax > 0.0)) {
        throw DegeneracyError("projection update: matrix to invert is zero", k, grid.point(k));
      }
      shift = lmax * 1e-12;
      while (cond(shift) > cond_limit && shift < lmax) shift *= 10.0;
      if (cond(shift) > cond_limit) {
        std::ostringstream os;
        os << "projection update: matrix stays ill-conditioned after jitter (cond "
           << cond(shift) << ")";
        throw DegeneracyError(os.str(), k, grid.point(k));
      }
      jittered.push_back(k);
    }
    const Matrix shifted = s + shift * Matrix::Identity(r, r);
    // M S^{-1} = (S^{-1} M^T)^T for symmetric S.
    out[k] = shifted.ldlt().solve(M.sample(k).transpose()).transpose();
  }
  if (boundary == BoundaryNode::first) out[0] = 2.0 * out[1] - out[2];
  if (boundary == BoundaryNode::last) out[last] = 2.0 * out[last - 1] - out[last - 2];
  return RegularizedSolve{MatrixTrajectory::from_samples(grid, std::move(out)),
                          std::move(jittered)};
}

Projection projection_update(const MatrixTrajectory& X, const MatrixTrajectory& Pr,
                             const MatrixTrajectory& Y, const MatrixTrajectory& Qr,
                             double cond_limit, bool boundary_limits) {
  auto v = right_solve_symmetric(X, Pr, cond_limit,
                                 boundary_limits ? BoundaryNode::first : BoundaryNode::none);
  auto w = right_solve_symmetric(Y, Qr, cond_limit,
                                 boundary_limits ? BoundaryNode::last : BoundaryNode::none);
  std::vector<std::size_t> nodes = v.jittered_nodes;
  nodes.insert(nodes.end(), w.jittered_nodes.begin(), w.jittered_nodes.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return Projection{std::move(v.value), std::move(w.value), std::move(nodes)};
}

RegularizedSolve adjoint_left_basis(const LtvSystem& sys, const LtvSystem& red, double eps_r,
                                    double cond_limit) {
  const auto adj = coupling_via_adjoint(sys, red, eps_r);
  auto w = right_solve_symmetric(adj.Xma, adj.Prma, cond_limit,
                                 eps_r == 0.0 ? BoundaryNode::first : BoundaryNode::none);
  const std::size_t last = sys.grid().n_steps();
  for (auto& k : w.jittered_nodes) k = last - k;
  std::sort(w.jittered_nodes.begin(), w.jittered_nodes.end());
  return RegularizedSolve{reverse(w.value), std::move(w.jittered_nodes)};
}

MatrixTrajectory stm_perturbation_first_order(const LtvSystem& red, const MatrixTrajectory& dAr) {
  const Index r = red.states();
  if (dAr.rows() != r || dAr.cols() != r || !(dAr.grid() == red.grid())) {
    throw DomainError("stm_perturbation_first_order: dAr must be r x r on the system grid");
  }
  const auto& grid = red.grid();
  // Stacked state [phi; D] with d/dt [phi; D] = [A 0; dA A] [phi; D].
  Matrix z0 = Matrix::Zero(2 * r, r);
  z0.topRows(r).setIdentity();
  auto rhs = [&](GridPoint p, const Matrix& z) -> Matrix {
    const Matrix a = red.A().at(p);
    Matrix dz(2 * r, r);
    dz.topRows(r) = a * z.topRows(r);
    dz.bottomRows(r) = a * z.bottomRows(r) + dAr.at(p) * z.topRows(r);
    return dz;
  };
  auto states = detail::integrate(grid, 0, grid.n_steps(), z0, rhs);
  std::vector<Matrix> out(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].bottomRows(r);
  return MatrixTrajectory::from_samples(grid, std::move(out));
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged:
      return "converged";
    case StopReason::max_iterations:
      return "max_iterations";
    case StopReason::diverging:
      return "diverging";
  }
  return "unknown";
}

namespace {

struct IterationState {
  CouplingBundle coupling;
  RegularizedSolve right;
  RegularizedSolve left;
};

IterationState solve_iteration(const LtvSystem& sys, const LtvSystem& red,
                               const TsiaOptions& options) {
  auto X = cross_reachability(sys, red);
  auto Pr = reduced_reachability(red, options.eps_r);
  MatrixTrajectory Y = X;
  MatrixTrajectory Qr = Pr;
  RegularizedSolve left{X, {}};
  // Pr(t0) and Qr(tf) vanish without regularization; the bases there are
  // limits from the neighbouring nodes.
  const bool limits = options.eps_r == 0.0;
  if (options.adjoint_path) {
    const auto adj = coupling_via_adjoint(sys, red, options.eps_r);
    Y = reverse(adj.Xma);
    Qr = reverse(adj.Prma);
    left = right_solve_symmetric(adj.Xma, adj.Prma, options.cond_limit,
                                 limits ? BoundaryNode::first : BoundaryNode::none);
    const std::size_t last = sys.grid().n_steps();
    for (auto& k : left.jittered_nodes) k = last - k;
    std::sort(left.jittered_nodes.begin(), left.jittered_nodes.end());
    left.value = reverse(left.value);
  } else {
    auto c = coupling(sys, red, options.eps_r);
    Y = c.Y;
    Qr = c.Qr;
    left = right_solve_symmetric(Y, Qr, options.cond_limit,
                                 limits ? BoundaryNode::last : BoundaryNode::none);
  }
  auto right = right_solve_symmetric(X, Pr, options.cond_limit,
                                     limits ? BoundaryNode::first : BoundaryNode::none);
  return IterationState{CouplingBundle{std::move(Pr), std::move(Qr), std::move(X), std::move(Y),
                                       options.eps_r},
                        std::move(right), std::move(left)};
}

}  // namespace

ReducedOrderModel tsia_step(const LtvSystem& sys, const LtvSystem& red, const TsiaOptions& options) {
  auto state = solve_iteration(sys, red, options);
  auto next = reduce_projection(sys, state.right.value, state.left.value, options.ar_form);
  return ReducedOrderModel{std::move(next), std::move(state.right.value),
                           std::move(state.left.value), ReductionMethod::tsia, 1};
}

TsiaResult tsia_reduce(const LtvSystem& sys, const ReducedOrderModel& init,
                       const TsiaOptions& options) {
  if (options.max_iterations < 1) throw DomainError("tsia: max_iterations must be >= 1");
  if (!(options.stop_tol > 0.0)) throw DomainError("tsia: stop_tol must be > 0");
  if (!(init.sys.grid() == sys.grid())) {
    throw DomainError("tsia: initial model and system live on different grids");
  }
  if (init.sys.states() >= sys.states()) throw DomainError("tsia: reduced order must be < n");

  const auto& grid = sys.grid();
  const SignalTrajectory u = options.probe_input ? *options.probe_input
                                                 : unit_step(grid, sys.inputs());
  if (!(u.grid() == grid)) throw DomainError("tsia: probe input lives on another grid");
  const Vector x0 = Vector::Zero(sys.states());
  const auto y = simulate(sys, u, x0);
  const double y_norm = l2_norm(y);
  const auto P = gramians(sys, 0.0, 0.0).P;

  TsiaResult result{init, {}};
  ReducedOrderModel current = init;
  std::size_t increases = 0;

  for (std::size_t it = 0;; ++it) {
    IterationState state = [&] {
      try {
        return solve_iteration(sys, current.sys, options);
      } catch (const DegeneracyError& e) {
        throw e.with_iteration(it);
      }
    }();
    const auto& c = state.coupling;

    TsiaRecord rec;
    rec.iteration = it;
    const auto yr = simulate(current.sys, u, Vector::Zero(current.sys.states()));
    rec.delta_absolute = l2_norm(subtract(y, yr));
    rec.delta_relative = y_norm > 0.0 ? rec.delta_absolute / y_norm : rec.delta_absolute;
    rec.delta = options.delta_measure == DeltaMeasure::absolute ? rec.delta_absolute
                                                                : rec.delta_relative;
    const auto Pr0 = options.eps_r == 0.0 ? c.Pr : reduced_reachability(current.sys, 0.0);
    rec.J = h2_error_sq_reach(sys, current.sys, P, c.X, Pr0);
    rec.residuals = optimality_residuals(functional_gradients(
        c.Pr, c.Qr, c.X, c.Y, sys.B(), current.sys.B(), sys.C(), current.sys.C()));
    rec.biorthogonality = biorthogonality_defect(current.Vr, current.Wr);
    rec.jittered_nodes = state.right.jittered_nodes.size() + state.left.jittered_nodes.size();
    result.trace.records.push_back(rec);

    const auto& recs = result.trace.records;
    if (rec.delta < recs[result.trace.best_iteration].delta || it == 0) {
      result.trace.best_iteration = it;
      result.model = current;
      result.model.iterations = it;
    }
    if (it > 0) {
      const double prev = recs[it - 1].delta;
      increases = rec.delta > prev ? increases + 1 : 0;
      if (std::abs(rec.delta - prev) / std::max(1.0, rec.delta) < options.stop_tol) {
        result.trace.reason = StopReason::converged;
        break;
      }
      if (increases >= options.patience) {
        result.trace.reason = StopReason::diverging;
        break;
      }
    }
    if (it == options.max_iterations) {
      result.trace.reason = StopReason::max_iterations;
      break;
    }

    auto next = reduce_projection(sys, state.right.value, state.left.value, options.ar_form);
    current = ReducedOrderModel{std::move(next), std::move(state.right.value),
                                std::move(state.left.value), ReductionMethod::tsia, it + 1};
  }
  if (result.trace.best_iteration > 0) result.model.method = ReductionMethod::tsia;
  return result;
}

}  // namespace ltvmor
