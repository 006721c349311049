// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "ltvmor/errors.hpp"
#include "ltvmor/timegrid.hpp"

using namespace ltvmor;

namespace {

MatrixTrajectory scalar_samples(const TimeGrid& g, double (*f)(double)) {
  std::vector<Matrix> s;
  for (std::size_t k = 0; k < g.size(); ++k) s.push_back(Matrix::Constant(1, 1, f(g.point(k))));
  return MatrixTrajectory::from_samples(g, std::move(s));
}

}  // namespace

TEST_CASE("uniform grid points") {
  const auto g = make_grid(0.0, 2.0, 4);
  REQUIRE(g.size() == 5);
  const double expected[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  for (std::size_t k = 0; k < 5; ++k) CHECK(g.point(k) == expected[k]);
  CHECK(g.step() == 0.5);
}

TEST_CASE("padded example grid") {
  const auto g = make_grid(-0.5, 2.5, 3000);
  CHECK(g.step() == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(g.reversal_time() == 2.0);
  CHECK(g.node_index(0.0) == 500);
  CHECK(g.node_index(2.0) == 2500);
}

TEST_CASE("grid rejects too few steps or empty interval") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 10), DomainError);
}

TEST_CASE("node lookup") {
  const auto g = make_grid(0.0, 1.0, 10);
  CHECK(g.find_node(0.3).value() == 3);
  CHECK_FALSE(g.find_node(0.35).has_value());
  CHECK_THROWS_AS(g.node_index(0.35), DomainError);
  CHECK(g.contains(1.0));
  CHECK_FALSE(g.contains(1.0001));
}

TEST_CASE("window keeps node positions") {
  const auto g = make_grid(-0.5, 2.5, 3000);
  const auto w = g.window(500, 2500);
  CHECK(w.n_steps() == 2000);
  CHECK(w.t0() == doctest::Approx(0.0));
  CHECK(w.tf() == doctest::Approx(2.0));
  for (std::size_t k = 0; k <= 2000; k += 250) {
    CHECK(w.point(k) == doctest::Approx(g.point(500 + k)).epsilon(1e-14));
  }
}

TEST_CASE("evaluation rules") {
  const auto g = make_grid(0.0, 1.0, 2);
  SUBCASE("constant") {
    Matrix M(2, 2);
    M << 1, 2, 3, 4;
    const auto c = MatrixTrajectory::constant(g, M);
    for (double t : {0.0, 0.13, 0.5, 0.99, 1.0}) CHECK(c.eval(t) == M);
  }
  SUBCASE("linear interpolation") {
    const auto g1 = make_grid(0.0, 1.0, 2);
    const auto s = MatrixTrajectory::from_samples(
        g1, {Matrix::Constant(1, 1, 0.0), Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.0)});
    CHECK(s.eval(0.25)(0, 0) == doctest::Approx(0.25));
    CHECK(s.eval_midpoint(1)(0, 0) == doctest::Approx(0.75));
    CHECK(s.eval_rule() == EvalRule::piecewise_linear);
  }
  SUBCASE("analytic") {
    const auto f = MatrixTrajectory::from_function(
        g, 1, 1, [](double t) { return Matrix::Constant(1, 1, t * std::exp(-t)); });
    CHECK(f.eval(1.0)(0, 0) == doctest::Approx(0.367879441171).epsilon(1e-12));
    CHECK(f.eval(0.3)(0, 0) == doctest::Approx(0.3 * std::exp(-0.3)).epsilon(1e-15));
    CHECK(f.is_analytic());
  }
  SUBCASE("outside the grid") {
    const auto c = MatrixTrajectory::zeros(g, 1, 1);
    CHECK_THROWS_AS(c.eval(-0.1), DomainError);
    CHECK_THROWS_AS(c.eval(1.1), DomainError);
  }
}

TEST_CASE("differentiate") {
  const auto g = make_grid(0.0, 2.0, 37);
  SUBCASE("constant") {
    const auto d = differentiate(MatrixTrajectory::constant(g, Matrix::Ones(2, 3)));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(d.sample(k).norm() == 0.0);
  }
  SUBCASE("linear") {
    const auto d = differentiate(scalar_samples(g, [](double t) { return 3.0 * t - 1.0; }));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(d.sample(k)(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("quadratic is exact at every node") {
    const auto d = differentiate(scalar_samples(g, [](double t) { return t * t; }));
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(std::abs(d.sample(k)(0, 0) - 2.0 * g.point(k)) < 1e-11);
    }
  }
}

TEST_CASE("reverse") {
  const auto g = make_grid(0.0, 2.0, 40);
  const auto f = scalar_samples(g, [](double t) { return t; });
  const auto r = reverse(f);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(r.sample(k)(0, 0) == doctest::Approx(2.0 - g.point(k)));

  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  std::vector<Matrix> s;
  for (std::size_t k = 0; k < g.size(); ++k) s.push_back(Matrix::NullaryExpr(2, 3, [&] { return nd(rng); }));
  const auto m = MatrixTrajectory::from_samples(g, s);
  const auto rr = reverse(reverse(m));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(rr.sample(k) == m.sample(k));

  const auto c = MatrixTrajectory::constant(g, Matrix::Identity(2, 2));
  CHECK(max_node_difference(reverse(c), c) == 0.0);

  const auto a = MatrixTrajectory::from_function(g, 1, 1, [](double t) { return Matrix::Constant(1, 1, std::sin(t)); });
  const auto ra = reverse(a);
  CHECK(ra.is_analytic());
  CHECK(ra.eval(0.77)(0, 0) == doctest::Approx(std::sin(2.0 - 0.77)).epsilon(1e-14));
}

TEST_CASE("trapezoid") {
  CHECK(integrate_trapz(MatrixTrajectory::constant(make_grid(0.0, 2.0, 17), Matrix::Ones(1, 1))) ==
        doctest::Approx(2.0).epsilon(1e-15));
  const auto g1 = make_grid(0.0, 1.0, 10);
  CHECK(integrate_trapz(scalar_samples(g1, [](double t) { return t; })) == doctest::Approx(0.5).epsilon(1e-15));
  const auto g2 = make_grid(0.0, 1.0, 1000);
  const double sq = integrate_trapz(scalar_samples(g2, [](double t) { return t * t; }));
  CHECK(std::abs(sq - 1.0 / 3.0) < 1e-6);
}

TEST_CASE("trapezoid error shrinks quadratically") {
  double prev = 0.0;
  for (std::size_t n : {50u, 100u, 200u}) {
    const auto g = make_grid(0.0, 1.0, n);
    const double err = std::abs(integrate_trapz(scalar_samples(g, [](double t) { return std::exp(t); })) -
                                (std::exp(1.0) - 1.0));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.01));
    prev = err;
  }
}

TEST_CASE("node algebra") {
  const auto g = make_grid(0.0, 1.0, 8);
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const auto A = MatrixTrajectory::constant(g, a);
  const auto B = MatrixTrajectory::constant(g, b);
  CHECK(multiply(A, B).sample(3) == a * b);
  CHECK(add(A, B).sample(5) == a + b);
  CHECK(scale(A, -2.0).sample(0) == -2.0 * a);
  CHECK(transpose(A).sample(8) == a.transpose());
  CHECK(restrict(A, 2, 6).grid().n_steps() == 4);
  CHECK_THROWS_AS(multiply(A, MatrixTrajectory::constant(g, Matrix::Ones(3, 1))), DomainError);
  CHECK_THROWS_AS(add(A, MatrixTrajectory::constant(make_grid(0.0, 1.0, 9), a)), DomainError);
}
