// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "ltvmor/errors.hpp"

namespace ltvmor::expr {
namespace {

struct FunctionName {
  std::string_view name;
  Function function;
};

constexpr std::array<FunctionName, 5> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
}};

std::string_view function_name(Function f) {
  for (const auto& entry : kFunctions) {
    if (entry.function == f) return entry.name;
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at position " << pos_;
    throw ParseError(os.str(), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (consume('+')) {
        lhs = binary(NodeKind::add, lhs, parse_term());
      } else if (consume('-')) {
        lhs = binary(NodeKind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (consume('*')) {
        lhs = binary(NodeKind::mul, lhs, parse_factor());
      } else if (consume('/')) {
        lhs = binary(NodeKind::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (consume('-')) return negate(parse_factor());
    NodePtr base = parse_base();
    if (consume('^')) return binary(NodeKind::pow, base, parse_factor());
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view ident = src_.substr(start, pos_ - start);
    if (ident == "t") return variable();
    for (const auto& entry : kFunctions) {
      if (entry.name == ident) {
        if (!consume('(')) fail("expected '(' after '" + std::string(ident) + "'");
        NodePtr arg = parse_expr();
        if (!consume(')')) fail("expected ')'");
        return call(entry.function, arg);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(ident) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double t) {
  switch (n.kind) {
    case NodeKind::number:
      return n.value;
    case NodeKind::variable:
      return t;
    case NodeKind::add:
      return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case NodeKind::sub:
      return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case NodeKind::mul:
      return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case NodeKind::div: {
      const double d = eval_node(*n.rhs, t);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_node(*n.lhs, t) / d;
    }
    case NodeKind::pow: {
      const double b = eval_node(*n.lhs, t);
      const double e = eval_node(*n.rhs, t);
      if (b < 0.0 && e != std::floor(e)) {
        throw DomainError("negative base raised to a non-integer power");
      }
      if (b == 0.0 && e < 0.0) throw DomainError("division by zero (0 to a negative power)");
      return std::pow(b, e);
    }
    case NodeKind::neg:
      return -eval_node(*n.lhs, t);
    case NodeKind::call: {
      const double x = eval_node(*n.lhs, t);
      switch (n.function) {
        case Function::sin:
          return std::sin(x);
        case Function::cos:
          return std::cos(x);
        case Function::exp:
          return std::exp(x);
        case Function::log:
          if (x <= 0.0) throw DomainError("log of a non-positive value");
          return std::log(x);
        case Function::sqrt:
          if (x < 0.0) throw DomainError("sqrt of a negative value");
          return std::sqrt(x);
      }
    }
  }
  throw DomainError("corrupt expression tree");
}

char op_symbol(NodeKind kind) {
  switch (kind) {
    case NodeKind::add:
      return '+';
    case NodeKind::sub:
      return '-';
    case NodeKind::mul:
      return '*';
    case NodeKind::div:
      return '/';
    case NodeKind::pow:
      return '^';
    default:
      return '?';
  }
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::number: {
      std::array<char, 32> buf{};
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
      (void)ec;
      out.append(buf.data(), ptr);
      return;
    }
    case NodeKind::variable:
      out += 't';
      return;
    case NodeKind::neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::call:
      out += function_name(n.function);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
    default:
      out += '(';
      print(*n.lhs, out);
      out += op_symbol(n.kind);
      print(*n.rhs, out);
      out += ')';
  }
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message), position_(position) {}

double Expr::eval(double t) const { return eval_node(*root_, t); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Expr parse(std::string_view source) { return Expr(Parser(source).parse_all()); }

double eval_expr(const Expr& e, double t) { return e.eval(t); }

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number:
      return a.value == b.value;
    case NodeKind::variable:
      return true;
    case NodeKind::neg:
      return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::call:
      return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::number;
  n->value = v;
  return n;
}

NodePtr variable() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::variable;
  return n;
}

NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr negate(NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::neg;
  n->lhs = std::move(operand);
  return n;
}

NodePtr call(Function f, NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->function = f;
  n->lhs = std::move(operand);
  return n;
}

}  // namespace ltvmor::expr
