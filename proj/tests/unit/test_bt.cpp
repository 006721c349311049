// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "../support.hpp"

using namespace ltvmor;
using namespace ltvmor::testing;

TEST_CASE("Hankel singular values of fixed pairs") {
  const auto g = make_grid(0.0, 1.0, 10);
  const auto I = MatrixTrajectory::constant(g, Matrix::Identity(2, 2));
  const auto h = hankel_singular_values(I, I);
  for (const auto& s : h.sigma) {
    CHECK(s(0) == doctest::Approx(1.0));
    CHECK(s(1) == doctest::Approx(1.0));
  }
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 4.0;
  p(1, 1) = 1.0;
  const auto h2 = hankel_singular_values(MatrixTrajectory::constant(g, p), I);
  CHECK(h2.sigma[3](0) == doctest::Approx(2.0));
  CHECK(h2.sigma[3](1) == doctest::Approx(1.0));
  CHECK(h2.channel(0).size() == g.size());
}

TEST_CASE("Hankel singular values match eig(PQ)") {
  std::mt19937 rng(301);
  const auto g = make_grid(0.0, 1.0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 3, 3), b = random_matrix(rng, 3, 3);
    const Matrix P = a * a.transpose(), Q = b * b.transpose();
    const auto h = hankel_singular_values(MatrixTrajectory::constant(g, P), MatrixTrajectory::constant(g, Q));
    Eigen::EigenSolver<Matrix> es(P * Q);
    std::vector<double> ev;
    for (Index i = 0; i < 3; ++i) ev.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(ev.rbegin(), ev.rend());
    for (Index i = 0; i < 3; ++i) CHECK(h.sigma[0](i) == doctest::Approx(ev[i]).epsilon(1e-8));
  }
}

TEST_CASE("indefinite gramian is rejected") {
  const auto g = make_grid(0.0, 1.0, 4);
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(hankel_singular_values(MatrixTrajectory::constant(g, bad),
                                         MatrixTrajectory::constant(g, Matrix::Identity(2, 2))),
                  DomainError);
}

TEST_CASE("subspace alignment") {
  Matrix prev(3, 1);
  prev << 1, 2, 3;
  CHECK((align_subspaces(prev, -prev) - prev).norm() < 1e-15);
  CHECK((align_subspaces(prev, prev) - prev).norm() < 1e-15);
  std::mt19937 rng(302);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix p = random_matrix(rng, 3, 2);
    Eigen::JacobiSVD<Matrix> svd(random_matrix(rng, 2, 2), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix rot = svd.matrixU() * svd.matrixV().transpose();
    const Matrix cur = (p + 1e-3 * random_matrix(rng, 3, 2)) * rot;
    CHECK((align_subspaces(p, cur) - p).norm() < 1e-2);
  }
}

TEST_CASE("already balanced LTI system") {
  // Decoupled modes with B = C = I: P = Q = diag(1/(2 a_i)) once transients
  // have died out.
  const auto g = make_grid(0.0, 30.0, 3000);
  const Matrix A = (Vector(3) << -1.0, -2.0, -3.0).finished().asDiagonal();
  const auto I = MatrixTrajectory::constant(g, Matrix::Identity(3, 3));
  const LtvSystem sys(MatrixTrajectory::constant(g, A), I, I);
  const auto rom = balanced_truncation(sys, 2, BtOptions{0.0, std::make_pair(10.0, 20.0), true});
  for (std::size_t k = 0; k < rom.sys.grid().size(); k += 250) {
    CHECK((rom.sys.A().sample(k) - A.topLeftCorner(2, 2)).norm() < 1e-6);
    CHECK(rom.Vr.sample(k).row(2).norm() < 1e-6);
    CHECK(rom.Wr.sample(k).row(2).norm() < 1e-6);
  }
}

TEST_CASE("full-order balancing is a similarity transform") {
  std::mt19937 rng(303);
  const auto g = make_grid(0.0, 1.0, 400);
  const auto sys = random_stable_system(rng, g, 3, 1, 1);
  const auto rom = balanced_truncation(sys, 3, 1e-2);
  CHECK(biorthogonality_defect(rom.Vr, rom.Wr) < 1e-10);
  const auto rep = h2_error_report(sys, rom.sys, {0.0, std::nullopt});
  CHECK(std::abs(rep.J_reach) < 1e-6);
}

TEST_CASE("truncation on random systems") {
  std::mt19937 rng(304);
  const auto g = make_grid(0.0, 1.0, 400);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = random_stable_system(rng, g, 4, 2, 2);
    const auto rom = balanced_truncation(sys, 2, 1e-2);
    CHECK(rom.sys.states() == 2);
    CHECK(rom.sys.inputs() == 2);
    CHECK(rom.sys.outputs() == 2);
    CHECK(biorthogonality_defect(rom.Vr, rom.Wr) < 1e-10);
    CHECK(rom.method == ReductionMethod::balanced_truncation);
  }
}

TEST_CASE("order validation") {
  std::mt19937 rng(305);
  const auto g = make_grid(0.0, 1.0, 40);
  const auto sys = random_stable_system(rng, g, 2, 1, 1);
  CHECK_THROWS_AS(balanced_truncation(sys, 0, 1e-3), DomainError);
  CHECK_THROWS_AS(balanced_truncation(sys, 3, 1e-3), DomainError);
  CHECK_NOTHROW(balanced_truncation(sys, 2, 1e-3));
  CHECK_THROWS_AS(balanced_truncation(sys, 1, BtOptions{1e-3, std::make_pair(0.1, 0.56), true}), DomainError);
}

TEST_CASE("PSD factor") {
  std::mt19937 rng(306);
  const Matrix a = random_matrix(rng, 3, 2);
  const Matrix P = a * a.transpose();
  const Matrix R = psd_factor(P);
  CHECK((R * R.transpose() - P).norm() < 1e-12);
  Matrix bad = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(psd_factor(bad), DomainError);
}
