// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

///
/// \file expr.hpp
///
/// Scalar expressions of time used for matrix entries in configuration
/// files, e.g. "2*exp(-t)".
///
/// Grammar, from loosest to tightest binding:
///
///     expr   := term (('+' | '-') term)*
///     term   := factor (('*' | '/') factor)*
///     factor := '-' factor | base ('^' factor)?
///     base   := number | 't' | func '(' expr ')' | '(' expr ')'
///     func   := sin | cos | exp | log | sqrt
///
/// '^' is right-associative and binds tighter than unary minus, so "-t^2"
/// is -(t^2) and "2^3^2" is 2^(3^2).
///
#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ltvmor::expr {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class NodeKind { number, variable, add, sub, mul, div, pow, neg, call };
enum class Function { sin, cos, exp, log, sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::number;
  double value = 0.0;                ///< number literal
  Function function = Function::sin; ///< call target
  NodePtr lhs;                       ///< binary lhs, unary/call operand
  NodePtr rhs;                       ///< binary rhs
};

/// Immutable parsed expression; cheap to copy and safe to share.
class Expr {
 public:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  /// Throws DomainError on log/sqrt of a negative value, log(0), division by
  /// zero, or a negative base raised to a non-integer power.
  double eval(double t) const;

  /// Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;

  const Node& root() const noexcept { return *root_; }

 private:
  NodePtr root_;
};

Expr parse(std::string_view source);

double eval_expr(const Expr& e, double t);

bool structurally_equal(const Node& a, const Node& b);

// Builders, mostly for tests and programmatic construction.
NodePtr number(double v);
NodePtr variable();
NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
NodePtr negate(NodePtr operand);
NodePtr call(Function f, NodePtr operand);

}  // namespace ltvmor::expr
