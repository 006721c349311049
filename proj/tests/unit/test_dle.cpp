// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "../support.hpp"

using namespace ltvmor;
using namespace ltvmor::testing;

TEST_CASE("forward Sylvester closed forms") {
  const auto g = make_grid(0.0, 1.0, 40);
  SUBCASE("constant forcing") {
    Matrix h(2, 3), x0(2, 3);
    h << 1, 2, 3, 4, 5, 6;
    x0.setConstant(0.5);
    const auto X = solve_forward_sylvester(MatrixTrajectory::zeros(g, 2, 2), MatrixTrajectory::zeros(g, 3, 3),
                                           MatrixTrajectory::constant(g, h), x0);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK((X.sample(k) - (x0 + g.point(k) * h)).norm() < 1e-13);
  }
  SUBCASE("H = t") {
    const auto X = solve_forward_sylvester(
        MatrixTrajectory::zeros(g, 1, 1), MatrixTrajectory::zeros(g, 1, 1),
        MatrixTrajectory::from_function(g, 1, 1, [](double t) { return Matrix::Constant(1, 1, t); }), Matrix::Zero(1, 1));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(X.sample(k)(0, 0) - 0.5 * g.point(k) * g.point(k)) < 1e-12);
  }
  SUBCASE("dimension checks") {
    CHECK_THROWS_AS(solve_forward_sylvester(MatrixTrajectory::zeros(g, 2, 2), MatrixTrajectory::zeros(g, 3, 3),
                                            MatrixTrajectory::zeros(g, 3, 3), Matrix::Zero(2, 3)),
                    DomainError);
  }
}

TEST_CASE("backward Sylvester closed forms") {
  const auto g = make_grid(0.0, 2.0, 40);
  SUBCASE("zero data") {
    const auto X = solve_backward_sylvester(MatrixTrajectory::zeros(g, 2, 2), MatrixTrajectory::zeros(g, 2, 2),
                                            MatrixTrajectory::zeros(g, 2, 2), Matrix::Zero(2, 2));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(X.sample(k).norm() == 0.0);
  }
  SUBCASE("unit forcing") {
    const auto X = solve_backward_sylvester(MatrixTrajectory::zeros(g, 1, 1), MatrixTrajectory::zeros(g, 1, 1),
                                            MatrixTrajectory::constant(g, Matrix::Ones(1, 1)), Matrix::Zero(1, 1));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(X.sample(k)(0, 0) - (2.0 - g.point(k))) < 1e-13);
  }
}

TEST_CASE("scalar gramians") {
  const auto g = make_grid(0.5, 2.0, 60);
  const LtvSystem sys(MatrixTrajectory::zeros(g, 1, 1), MatrixTrajectory::constant(g, Matrix::Ones(1, 1)),
                      MatrixTrajectory::constant(g, Matrix::Ones(1, 1)));
  const auto gr = gramians(sys, 0.0, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(gr.P.sample(k)(0, 0) - (g.point(k) - 0.5)) < 1e-13);
    CHECK(std::abs(gr.Q.sample(k)(0, 0) - (2.0 - g.point(k))) < 1e-13);
  }
}

TEST_CASE("example gramian boundary values") {
  const auto g = make_grid(-0.5, 2.5, 3000);
  const LtvSystem sys(MatrixTrajectory::from_function(g, 2, 2,
                                                      [](double t) {
                                                        Matrix a(2, 2);
                                                        a << t, 2 * std::exp(-t), 1, t * std::exp(-t);
                                                        return a;
                                                      }),
                      MatrixTrajectory::constant(g, Matrix::Ones(2, 1)), MatrixTrajectory::constant(g, Matrix::Ones(1, 2)));
  const auto gr = gramians(sys, 0.001, 0.001);
  CHECK(gr.P.sample(0) == 0.001 * Matrix::Identity(2, 2));
  CHECK(gr.Q.sample(3000) == 0.001 * Matrix::Identity(2, 2));
  for (std::size_t k = 0; k < g.size(); k += 100) {
    CHECK((gr.P.sample(k) - gr.P.sample(k).transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(gr.P.sample(k)).eigenvalues().minCoeff() > 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(gr.Q.sample(k)).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("gramians against STM quadrature") {
  std::mt19937 rng(101);
  const auto g = make_grid(0.0, 1.0, 400);
  for (int trial = 0; trial < 3; ++trial) {
    const auto sys = random_stable_system(rng, g, 2, 1, 1);
    const double eps = trial == 0 ? 0.0 : 0.01;
    const auto gr = gramians(sys, eps, eps);
    const StmTable phi(sys.A());
    for (std::size_t k : {0u, 100u, 250u, 400u}) {
      CHECK(rel(gr.P.sample(k), reachability_by_quadrature(sys, phi, k, eps)) < 1e-5);
      CHECK(rel(gr.Q.sample(k), observability_by_quadrature(sys, phi, k, eps)) < 1e-5);
    }
  }
}

TEST_CASE("reachability gramian is nondecreasing") {
  std::mt19937 rng(102);
  const auto g = make_grid(0.0, 1.0, 200);
  const auto sys = random_stable_system(rng, g, 3, 2, 1);
  // P(t2) - phi P(t1) phi^T >= 0; with A stable plain monotonicity need not
  // hold, so check the propagated form.
  const auto P = gramians(sys, 0.0, 0.0).P;
  const StmTable phi(sys.A());
  for (std::size_t k = 20; k <= 200; k += 20) {
    const Matrix d = P.sample(k) - phi(k, k - 20) * P.sample(k - 20) * phi(k, k - 20).transpose();
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(d).eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("coupling terms") {
  std::mt19937 rng(103);
  const auto g = make_grid(0.0, 1.0, 400);
  SUBCASE("red = sys reproduces the gramians") {
    const auto sys = random_stable_system(rng, g, 3, 1, 2);
    const auto gr = gramians(sys, 0.0, 0.0);
    const auto c = coupling(sys, sys, 0.0);
    CHECK(max_node_difference(c.X, gr.P) < 1e-10);
    CHECK(max_node_difference(c.Y, gr.Q) < 1e-10);
    CHECK(max_node_difference(c.Pr, gr.P) < 1e-10);
    CHECK(max_node_difference(c.Qr, gr.Q) < 1e-10);
  }
  SUBCASE("zero reduced input") {
    const auto sys = random_stable_system(rng, g, 3, 1, 1);
    const auto r0 = random_reduced_system(rng, g, 1, 1, 1);
    const LtvSystem red(r0.A(), MatrixTrajectory::zeros(g, 1, 1), r0.C());
    const auto c = coupling(sys, red, 0.0);
    for (std::size_t k = 0; k < g.size(); k += 50) {
      CHECK(c.X.sample(k).norm() == 0.0);
      CHECK(c.Pr.sample(k).norm() == 0.0);
    }
  }
  SUBCASE("cross term against STM quadrature") {
    const auto sys = random_stable_system(rng, g, 2, 1, 1);
    const auto red = random_reduced_system(rng, g, 1, 1, 1);
    const auto X = cross_reachability(sys, red);
    const StmTable phi(sys.A()), phir(red.A());
    for (std::size_t k : {100u, 200u, 400u}) CHECK(rel(X.sample(k), cross_by_quadrature(sys, red, phi, phir, k)) < 1e-5);
  }
  SUBCASE("boundary values") {
    const auto sys = random_stable_system(rng, g, 3, 2, 1);
    const auto red = random_reduced_system(rng, g, 2, 2, 1);
    const auto c = coupling(sys, red, 0.25);
    CHECK(c.X.sample(0).norm() == 0.0);
    CHECK(c.Y.sample(400).norm() == 0.0);
    CHECK(c.Pr.sample(0) == 0.25 * Matrix::Identity(2, 2));
    CHECK(c.Qr.sample(400) == 0.25 * Matrix::Identity(2, 2));
  }
}

TEST_CASE("modified adjoint coupling") {
  std::mt19937 rng(104);
  const auto g = make_grid(0.0, 1.5, 300);
  for (int trial = 0; trial < 3; ++trial) {
    const auto sys = random_stable_system(rng, g, 3, 1, 2);
    const auto red = random_reduced_system(rng, g, 2, 1, 2);
    const auto a = coupling_via_adjoint(sys, red);
    CHECK(a.Xma.sample(0).norm() == 0.0);
    CHECK(a.Prma.sample(0).norm() == 0.0);
    const auto c = coupling(sys, red, 0.0);
    CHECK(max_node_difference(reverse(a.Xma), c.Y) < 1e-6);
    CHECK(max_node_difference(reverse(a.Prma), c.Qr) < 1e-6);
  }
  SUBCASE("self-adjoint LTI pair") {
    Matrix a(2, 2), b(2, 1);
    a << -2, 0.3, 0.3, -1;
    b << 1, -1;
    const LtvSystem sys(MatrixTrajectory::constant(g, a), MatrixTrajectory::constant(g, b),
                        MatrixTrajectory::constant(g, b.transpose()));
    const LtvSystem red(MatrixTrajectory::constant(g, Matrix::Constant(1, 1, -1.5)),
                        MatrixTrajectory::constant(g, Matrix::Ones(1, 1)), MatrixTrajectory::constant(g, Matrix::Ones(1, 1)));
    const auto ma = coupling_via_adjoint(sys, red);
    const auto X = cross_reachability(sys, red);
    CHECK(max_node_difference(ma.Xma, X) < 1e-8);
  }
}
