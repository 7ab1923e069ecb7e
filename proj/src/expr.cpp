#include "tractorkit/expr.hpp"

#include <cctype>

namespace tk {

namespace {

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

NodePtr make(Expr::Op op, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(s_) + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+'))
        lhs = make(Expr::Op::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Expr::Op::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*'))
        lhs = make(Expr::Op::Mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Expr::Op::Div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Expr::Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer literal");
    if (pos_ - start > 4) fail("exponent too large");
    auto n = std::make_shared<Node>();
    n->op = Expr::Op::Pow;
    n->power = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
    n->args = {base};
    return n;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!accept(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      auto n = std::make_shared<Node>();
      n->op = Expr::Op::Const;
      try {
        n->value = Rational::parse(s_.substr(start, pos_ - start));
      } catch (const ParseError&) {
        fail("malformed number");
      }
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word(s_.substr(start, pos_ - start));
      if (word.size() >= 2 && word[0] == 'x' && word.find_first_not_of("0123456789", 1) == std::string::npos) {
        if (word.size() > 4) fail("coordinate index too large");
        const int v = std::stoi(word.substr(1));
        if (v < 1 || v > dim_) fail("coordinate " + word + " outside x1..x" + std::to_string(dim_));
        auto n = std::make_shared<Node>();
        n->op = Expr::Op::Var;
        n->var = v - 1;
        return n;
      }
      Expr::Func f;
      if (word == "sin")
        f = Expr::Func::Sin;
      else if (word == "cos")
        f = Expr::Func::Cos;
      else if (word == "exp")
        f = Expr::Func::Exp;
      else if (word == "log")
        f = Expr::Func::Log;
      else if (word == "sqrt")
        f = Expr::Func::Sqrt;
      else
        fail("unknown identifier '" + word + "'");
      if (!accept('(')) fail("expected '(' after " + word);
      NodePtr arg = expression();
      if (!accept(')')) fail("missing ')'");
      auto n = std::make_shared<Node>();
      n->op = Expr::Op::Call;
      n->func = f;
      n->args = {arg};
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

bool rational_node(const Node& n) {
  if (n.op == Expr::Op::Call) return false;
  for (const auto& a : n.args)
    if (!rational_node(*a)) return false;
  return true;
}

template <class T>
Jet<T> eval(const Node& n, std::span<const Jet<T>> x) {
  switch (n.op) {
    case Expr::Op::Const:
      return Jet<T>(RingTraits<T>::from_rational(n.value));
    case Expr::Op::Var:
      if (n.var >= static_cast<int>(x.size())) throw DimensionMismatch("expression uses a coordinate beyond the chart");
      return x[static_cast<std::size_t>(n.var)];
    case Expr::Op::Add:
      return eval(*n.args[0], x) + eval(*n.args[1], x);
    case Expr::Op::Sub:
      return eval(*n.args[0], x) - eval(*n.args[1], x);
    case Expr::Op::Mul:
      return eval(*n.args[0], x) * eval(*n.args[1], x);
    case Expr::Op::Div:
      return eval(*n.args[0], x) / eval(*n.args[1], x);
    case Expr::Op::Neg:
      return -eval(*n.args[0], x);
    case Expr::Op::Pow:
      return eval(*n.args[0], x).pow(n.power);
    case Expr::Op::Call:
      if constexpr (RingTraits<T>::exact) {
        throw PreconditionViolation("elementary functions need the float ring");
      } else {
        const Jet<double> a = eval(*n.args[0], x);
        switch (n.func) {
          case Expr::Func::Sin: return sin(a);
          case Expr::Func::Cos: return cos(a);
          case Expr::Func::Exp: return exp(a);
          case Expr::Func::Log: return log(a);
          case Expr::Func::Sqrt: return sqrt(a);
        }
      }
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expr Expr::parse(std::string_view text, int dim) {
  Parser p(text, dim);
  return Expr(p.parse(), std::string(text));
}

Expr Expr::constant(Rational c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return Expr(n, c.is_integer() ? c.numerator().get_str() : c.to_string());
}

bool Expr::is_rational() const { return rational_node(*root_); }

template <class T>
Jet<T> Expr::evaluate(std::span<const Jet<T>> coords) const {
  return eval<T>(*root_, coords);
}

template Jet<Rational> Expr::evaluate(std::span<const Jet<Rational>>) const;
template Jet<double> Expr::evaluate(std::span<const Jet<double>>) const;

}  // namespace tk
