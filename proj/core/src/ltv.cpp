// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/ltv.hpp"

#include <cmath>
#include <sstream>

#include "ltvmor/errors.hpp"
#include "rk4.hpp"

namespace ltvmor {
namespace {

std::string shape(const MatrixTrajectory& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

LtvSystem::LtvSystem(MatrixTrajectory A, MatrixTrajectory B, MatrixTrajectory C)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
  if (!(A_.grid() == B_.grid()) || !(A_.grid() == C_.grid())) {
    throw DomainError("LtvSystem: A, B and C must share one grid");
  }
  if (A_.rows() != A_.cols()) throw DomainError("LtvSystem: A is " + shape(A_) + ", not square");
  if (B_.rows() != A_.rows()) {
    throw DomainError("LtvSystem: B is " + shape(B_) + " but A is " + shape(A_));
  }
  if (C_.cols() != A_.rows()) {
    throw DomainError("LtvSystem: C is " + shape(C_) + " but A is " + shape(A_));
  }
}

LtvSystem restrict(const LtvSystem& sys, std::size_t first, std::size_t last) {
  return LtvSystem(restrict(sys.A(), first, last), restrict(sys.B(), first, last),
                   restrict(sys.C(), first, last));
}

// --- signals -----------------------------------------------------------------

SignalTrajectory::SignalTrajectory(MatrixTrajectory values) : values_(std::move(values)) {
  if (values_.cols() != 1) throw DomainError("signal trajectories are column vectors");
}

SignalTrajectory SignalTrajectory::from_samples(const TimeGrid& grid, std::vector<Vector> values) {
  std::vector<Matrix> m(values.begin(), values.end());
  return SignalTrajectory(MatrixTrajectory::from_samples(grid, std::move(m)));
}

SignalTrajectory SignalTrajectory::from_function(const TimeGrid& grid, Index dim,
                                                 std::function<Vector(double)> f) {
  return SignalTrajectory(MatrixTrajectory::from_function(
      grid, dim, 1, [f = std::move(f)](double t) -> Matrix { return f(t); }));
}

SignalTrajectory SignalTrajectory::constant(const TimeGrid& grid, const Vector& value) {
  return SignalTrajectory(MatrixTrajectory::constant(grid, value));
}

SignalTrajectory unit_step(const TimeGrid& grid, Index inputs) {
  return SignalTrajectory::constant(grid, Vector::Ones(inputs));
}

double l2_norm(const SignalTrajectory& s) { return l2_norm(s.trajectory()); }

SignalTrajectory subtract(const SignalTrajectory& a, const SignalTrajectory& b) {
  return SignalTrajectory(add(a.trajectory(), scale(b.trajectory(), -1.0)));
}

std::string to_string(ReductionMethod m) {
  return m == ReductionMethod::balanced_truncation ? "bt" : "tsia";
}

double biorthogonality_defect(const MatrixTrajectory& Vr, const MatrixTrajectory& Wr) {
  if (Vr.size() != Wr.size() || Vr.rows() != Wr.rows() || Vr.cols() != Wr.cols()) {
    throw DomainError("biorthogonality_defect: Vr and Wr shapes differ");
  }
  const Matrix eye = Matrix::Identity(Vr.cols(), Vr.cols());
  double worst = 0.0;
  for (std::size_t k = 0; k < Vr.size(); ++k) {
    worst = std::max(worst, (Wr.sample(k).transpose() * Vr.sample(k) - eye).norm());
  }
  return worst;
}

// --- adjoint -----------------------------------------------------------------

LtvSystem adjoint(const LtvSystem& sys) {
  return LtvSystem(scale(transpose(sys.A()), -1.0), scale(transpose(sys.C()), -1.0),
                   transpose(sys.B()));
}

LtvSystem modified_adjoint(const LtvSystem& sys) {
  return LtvSystem(transpose(reverse(sys.A())), transpose(reverse(sys.C())),
                   transpose(reverse(sys.B())));
}

// --- state transition ----------------------------------------------------------

MatrixTrajectory stm_from_node(const MatrixTrajectory& A, std::size_t tau_index, StmSpan span) {
  const auto& grid = A.grid();
  if (tau_index > grid.n_steps()) throw DomainError("stm: tau index outside the grid");
  const Index n = A.rows();
  auto rhs = [&A](GridPoint p, const Matrix& x) -> Matrix { return A.at(p) * x; };

  std::vector<Matrix> samples(grid.size(), Matrix::Zero(n, n));
  auto fwd = detail::integrate(grid, tau_index, grid.n_steps(), Matrix::Identity(n, n), rhs);
  for (std::size_t i = 0; i < fwd.size(); ++i) samples[tau_index + i] = std::move(fwd[i]);
  if (span == StmSpan::both && tau_index > 0) {
    auto bwd = detail::integrate(grid, tau_index, 0, Matrix::Identity(n, n), rhs);
    for (std::size_t i = 1; i < bwd.size(); ++i) samples[tau_index - i] = std::move(bwd[i]);
  }
  return MatrixTrajectory::from_samples(grid, std::move(samples));
}

MatrixTrajectory stm_from_node(const LtvSystem& sys, std::size_t tau_index, StmSpan span) {
  return stm_from_node(sys.A(), tau_index, span);
}

MatrixTrajectory stm(const LtvSystem& sys, double tau, StmSpan span) {
  return stm_from_node(sys, sys.grid().node_index(tau), span);
}

// --- simulation ----------------------------------------------------------------

SignalTrajectory simulate_state(const LtvSystem& sys, const SignalTrajectory& u,
                                const Vector& x0) {
  if (!(u.grid() == sys.grid())) throw DomainError("simulate: input lives on another grid");
  if (u.dim() != sys.inputs()) {
    std::ostringstream os;
    os << "simulate: input has dimension " << u.dim() << ", system expects " << sys.inputs();
    throw DomainError(os.str());
  }
  if (x0.size() != sys.states()) {
    std::ostringstream os;
    os << "simulate: x0 has dimension " << x0.size() << ", system has " << sys.states()
       << " states";
    throw DomainError(os.str());
  }
  const auto& grid = sys.grid();
  auto rhs = [&](GridPoint p, const Matrix& x) -> Matrix {
    return sys.A().at(p) * x + sys.B().at(p) * u.at(p);
  };
  auto states = detail::integrate(grid, 0, grid.n_steps(), Matrix(x0), rhs);
  return SignalTrajectory(MatrixTrajectory::from_samples(grid, std::move(states)));
}

SignalTrajectory simulate(const LtvSystem& sys, const SignalTrajectory& u, const Vector& x0) {
  const auto x = simulate_state(sys, u, x0);
  std::vector<Matrix> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = sys.C().sample(k) * x.trajectory().sample(k);
  return SignalTrajectory(MatrixTrajectory::from_samples(sys.grid(), std::move(y)));
}

MatrixTrajectory impulse_response_from_node(const LtvSystem& sys, std::size_t tau_index) {
  const auto phi = stm_from_node(sys, tau_index, StmSpan::forward);
  const Matrix& b_tau = sys.B().sample(tau_index);
  std::vector<Matrix> h(phi.size(), Matrix::Zero(sys.outputs(), sys.inputs()));
  for (std::size_t k = tau_index; k < phi.size(); ++k) {
    h[k] = sys.C().sample(k) * phi.sample(k) * b_tau;
  }
  return MatrixTrajectory::from_samples(sys.grid(), std::move(h));
}

MatrixTrajectory impulse_response(const LtvSystem& sys, double tau) {
  return impulse_response_from_node(sys, sys.grid().node_index(tau));
}

// --- projection ----------------------------------------------------------------

LtvSystem reduce_projection(const LtvSystem& sys, const MatrixTrajectory& Vr,
                            const MatrixTrajectory& Wr, ArForm form) {
  if (!(Vr.grid() == sys.grid()) || !(Wr.grid() == sys.grid())) {
    throw DomainError("reduce_projection: projections live on another grid");
  }
  if (Vr.rows() != sys.states() || Wr.rows() != sys.states() || Vr.cols() != Wr.cols()) {
    std::ostringstream os;
    os << "reduce_projection: Vr is " << shape(Vr) << ", Wr is " << shape(Wr) << ", system has "
       << sys.states() << " states";
    throw DomainError(os.str());
  }
  const std::size_t n = sys.grid().size();
  std::vector<Matrix> ar(n), br(n), cr(n);
  if (form == ArForm::subtract_dV) {
    const auto dV = differentiate(Vr);
    for (std::size_t k = 0; k < n; ++k) {
      ar[k] = Wr.sample(k).transpose() * (sys.A().sample(k) * Vr.sample(k) - dV.sample(k));
    }
  } else {
    const auto dW = differentiate(Wr);
    for (std::size_t k = 0; k < n; ++k) {
      ar[k] = (Wr.sample(k).transpose() * sys.A().sample(k) + dW.sample(k).transpose()) *
              Vr.sample(k);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    br[k] = Wr.sample(k).transpose() * sys.B().sample(k);
    cr[k] = sys.C().sample(k) * Vr.sample(k);
  }
  const auto& grid = sys.grid();
  return LtvSystem(MatrixTrajectory::from_samples(grid, std::move(ar)),
                   MatrixTrajectory::from_samples(grid, std::move(br)),
                   MatrixTrajectory::from_samples(grid, std::move(cr)));
}

MatrixTrajectory expression_trajectory(const TimeGrid& grid, const ExprMatrix& entries) {
  if (entries.empty() || entries.front().empty()) {
    throw DomainError("expression matrix must be non-empty");
  }
  const auto rows = static_cast<Index>(entries.size());
  const auto cols = static_cast<Index>(entries.front().size());
  for (const auto& row : entries) {
    if (static_cast<Index>(row.size()) != cols) throw DomainError("ragged expression matrix");
  }
  return MatrixTrajectory::from_function(grid, rows, cols, [entries, rows, cols](double t) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        m(i, j) = entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(t);
      }
    }
    return m;
  });
}

}  // namespace ltvmor
