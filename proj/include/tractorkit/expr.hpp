#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tractorkit/jet.hpp"

namespace tk {

/// Parsed coordinate expression in x1..xn (grammar in README.md).
///
/// Rational expressions (no function calls) evaluate on both rings; sin, cos,
/// exp, log and sqrt are available only on the float ring.
class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
  enum class Func { Sin, Cos, Exp, Log, Sqrt };

  struct Node {
    Op op = Op::Const;
    Rational value;    // Const
    int var = 0;       // Var, zero-based
    unsigned power = 0;  // Pow
    Func func = Func::Sin;  // Call
    std::vector<std::shared_ptr<const Node>> args;
  };
  using NodePtr = std::shared_ptr<const Node>;

  Expr() = default;
  explicit Expr(NodePtr root, std::string text = {}) : root_(std::move(root)), text_(std::move(text)) {}

  /// Throws ParseError on malformed text or a variable index outside 1..dim.
  static Expr parse(std::string_view text, int dim);
  static Expr constant(Rational c);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::string& text() const { return text_; }
  bool is_rational() const;
  bool is_zero_literal() const { return root_->op == Op::Const && root_->value.is_zero(); }

  /// Evaluates with coords[i] standing for x_{i+1}. Division by a jet whose
  /// value is zero throws EvaluationSingularity.
  template <class T>
  Jet<T> evaluate(std::span<const Jet<T>> coords) const;

 private:
  NodePtr root_;
  std::string text_;
};

extern template Jet<Rational> Expr::evaluate(std::span<const Jet<Rational>>) const;
extern template Jet<double> Expr::evaluate(std::span<const Jet<double>>) const;

}  // namespace tk
