// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/dle.hpp"

#include <sstream>

#include "ltvmor/errors.hpp"
#include "rk4.hpp"

namespace ltvmor {
namespace {

void check_sylvester(const MatrixTrajectory& F, const MatrixTrajectory& G,
                     const MatrixTrajectory& H, const Matrix& X) {
  if (!(F.grid() == G.grid()) || !(F.grid() == H.grid())) {
    throw DomainError("sylvester: coefficients live on different grids");
  }
  const bool ok = F.rows() == F.cols() && G.rows() == G.cols() && H.rows() == F.rows() &&
                  H.cols() == G.rows() && X.rows() == H.rows() && X.cols() == H.cols();
  if (!ok) {
    std::ostringstream os;
    os << "sylvester: incompatible shapes F " << F.rows() << "x" << F.cols() << ", G "
       << G.rows() << "x" << G.cols() << ", H " << H.rows() << "x" << H.cols() << ", X "
       << X.rows() << "x" << X.cols();
    throw DomainError(os.str());
  }
}

}  // namespace

MatrixTrajectory solve_forward_sylvester(const MatrixTrajectory& F, const MatrixTrajectory& G,
                                         const MatrixTrajectory& H, const Matrix& X0,
                                         Symmetry symmetry) {
  check_sylvester(F, G, H, X0);
  const auto& grid = F.grid();
  auto rhs = [&](GridPoint p, const Matrix& x) -> Matrix {
    return F.at(p) * x + x * G.at(p).transpose() + H.at(p);
  };
  if (symmetry == Symmetry::general) {
    return MatrixTrajectory::from_samples(grid, detail::integrate(grid, 0, grid.n_steps(), X0, rhs));
  }
  // Symmetrize after every step, which needs step-by-step control.
  std::vector<Matrix> out;
  out.reserve(grid.size());
  out.push_back(0.5 * (X0 + X0.transpose()));
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    auto step = detail::integrate(grid, k, k + 1, out.back(), rhs);
    out.push_back(0.5 * (step.back() + step.back().transpose()));
  }
  return MatrixTrajectory::from_samples(grid, std::move(out));
}

MatrixTrajectory solve_backward_sylvester(const MatrixTrajectory& F, const MatrixTrajectory& G,
                                          const MatrixTrajectory& H, const Matrix& Xf,
                                          Symmetry symmetry) {
  check_sylvester(F, G, H, Xf);
  // With s = Ti - t and Z(s) = X(Ti - s):
  //   dZ/ds = F(Ti - s)^T Z + Z G(Ti - s) + H(Ti - s),  Z(t0) = Xf.
  const auto Z = solve_forward_sylvester(transpose(reverse(F)), transpose(reverse(G)), reverse(H),
                                         Xf, symmetry);
  return reverse(Z);
}

GramianBundle gramians(const LtvSystem& sys, double eps_P, double eps_Q) {
  if (eps_P < 0.0 || eps_Q < 0.0) throw DomainError("gramians: regularization must be >= 0");
  const Index n = sys.states();
  const Matrix eye = Matrix::Identity(n, n);
  const auto BBt = multiply(sys.B(), transpose(sys.B()));
  const auto CtC = multiply(transpose(sys.C()), sys.C());
  return GramianBundle{
      solve_forward_sylvester(sys.A(), sys.A(), BBt, eps_P * eye, Symmetry::symmetric),
      solve_backward_sylvester(sys.A(), sys.A(), CtC, eps_Q * eye, Symmetry::symmetric),
      eps_P, eps_Q};
}

namespace {

void check_pair(const LtvSystem& sys, const LtvSystem& red) {
  if (!(sys.grid() == red.grid())) throw DomainError("coupling: systems live on different grids");
  if (sys.inputs() != red.inputs() || sys.outputs() != red.outputs()) {
    std::ostringstream os;
    os << "coupling: full system has " << sys.inputs() << " inputs / " << sys.outputs()
       << " outputs, reduced has " << red.inputs() << " / " << red.outputs();
    throw DomainError(os.str());
  }
}

}  // namespace

MatrixTrajectory cross_reachability(const LtvSystem& sys, const LtvSystem& red) {
  check_pair(sys, red);
  return solve_forward_sylvester(sys.A(), red.A(), multiply(sys.B(), transpose(red.B())),
                                 Matrix::Zero(sys.states(), red.states()));
}

MatrixTrajectory reduced_reachability(const LtvSystem& red, double eps_r) {
  const Index r = red.states();
  return solve_forward_sylvester(red.A(), red.A(), multiply(red.B(), transpose(red.B())),
                                 eps_r * Matrix::Identity(r, r), Symmetry::symmetric);
}

CouplingBundle coupling(const LtvSystem& sys, const LtvSystem& red, double eps_r) {
  check_pair(sys, red);
  if (eps_r < 0.0) throw DomainError("coupling: regularization must be >= 0");
  const Index n = sys.states();
  const Index r = red.states();
  auto Pr = reduced_reachability(red, eps_r);
  auto X = cross_reachability(sys, red);
  auto Qr = solve_backward_sylvester(red.A(), red.A(), multiply(transpose(red.C()), red.C()),
                                     eps_r * Matrix::Identity(r, r), Symmetry::symmetric);
  auto Y = solve_backward_sylvester(sys.A(), red.A(), multiply(transpose(sys.C()), red.C()),
                                    Matrix::Zero(n, r));
  return CouplingBundle{std::move(Pr), std::move(Qr), std::move(X), std::move(Y), eps_r};
}

AdjointCoupling coupling_via_adjoint(const LtvSystem& sys, const LtvSystem& red, double eps_r) {
  check_pair(sys, red);
  const auto sys_ma = modified_adjoint(sys);
  const auto red_ma = modified_adjoint(red);
  return AdjointCoupling{cross_reachability(sys_ma, red_ma), reduced_reachability(red_ma, eps_r)};
}

}  // namespace ltvmor
