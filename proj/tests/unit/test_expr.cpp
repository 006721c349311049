// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "ltvmor/errors.hpp"
#include "ltvmor/expr.hpp"

using namespace ltvmor;
using namespace ltvmor::expr;

TEST_CASE("parse trees") {
  CHECK(structurally_equal(parse("2*exp(-t)").root(),
                           *binary(NodeKind::mul, number(2), call(Function::exp, negate(variable())))));
  CHECK(structurally_equal(parse("t*exp(-t)").root(),
                           *binary(NodeKind::mul, variable(), call(Function::exp, negate(variable())))));
  CHECK(structurally_equal(parse("1 + 2 * 3").root(),
                           *binary(NodeKind::add, number(1), binary(NodeKind::mul, number(2), number(3)))));
  CHECK(structurally_equal(parse("2^3^2").root(),
                           *binary(NodeKind::pow, number(2), binary(NodeKind::pow, number(3), number(2)))));
}

TEST_CASE("syntax errors report the position") {
  try {
    parse("1 + * 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("(t"), ParseError);
  CHECK_THROWS_AS(parse("t)"), ParseError);
  CHECK_THROWS_AS(parse("foo(t)"), ParseError);
  CHECK_THROWS_AS(parse("2 t"), ParseError);
  CHECK_THROWS_AS(parse("x"), ParseError);
}

TEST_CASE("evaluation") {
  CHECK(eval_expr(parse("2*exp(-t)"), 0.0) == 2.0);
  CHECK(eval_expr(parse("t^2/2"), 3.0) == 4.5);
  CHECK(eval_expr(parse("-t^2"), 3.0) == -9.0);
  CHECK(eval_expr(parse("2^-1"), 0.0) == 0.5);
  CHECK(eval_expr(parse("1 - 2 - 3"), 0.0) == -4.0);
  CHECK(eval_expr(parse("8 / 4 / 2"), 0.0) == 1.0);
  CHECK(eval_expr(parse("sin(t)^2 + cos(t)^2"), 0.7) == doctest::Approx(1.0));
  CHECK(eval_expr(parse("log(exp(t))"), 1.5) == doctest::Approx(1.5));
  CHECK(eval_expr(parse("sqrt(t)"), 4.0) == 2.0);
  CHECK(eval_expr(parse("1.5e-3 * 2E2"), 0.0) == doctest::Approx(0.3));
  CHECK(eval_expr(parse("(-2)^3"), 0.0) == -8.0);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(eval_expr(parse("sqrt(t-1)"), 0.0), DomainError);
  CHECK_THROWS_AS(eval_expr(parse("log(t)"), 0.0), DomainError);
  CHECK_THROWS_AS(eval_expr(parse("1/t"), 0.0), DomainError);
  CHECK_THROWS_AS(eval_expr(parse("(-2)^0.5"), 0.0), DomainError);
}

TEST_CASE("printing round-trips") {
  std::mt19937 rng(11);
  const char* atoms[] = {"t", "2", "0.5", "exp(t)", "sin(-t)", "(t+1)"};
  const char* ops[] = {"+", "-", "*", "/", "^"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string s = atoms[rng() % 6];
    const int terms = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < terms; ++i) {
      s += ops[rng() % 5];
      s += atoms[rng() % 6];
    }
    const auto e = parse(s);
    const auto back = parse(e.to_string());
    CHECK_MESSAGE(structurally_equal(e.root(), back.root()), s);
  }
}
