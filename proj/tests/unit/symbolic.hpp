#pragma once

// Small symbolic rational-function algebra used as an oracle: expressions are
// trees, derivatives are taken by the textbook rules and evaluation is exact.
// Nothing here touches the jet engine.

#include <memory>
#include <vector>

#include "tractorkit/rational.hpp"

namespace sym {

using tk::Rational;

struct Node;
using E = std::shared_ptr<const Node>;

struct Node {
  enum class Op { Const, Var, Add, Mul, Div, Pow };
  Op op = Op::Const;
  Rational value;
  int var = 0;
  unsigned power = 0;
  E a, b;
};

inline E c(Rational v) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  return n;
}
inline E x(int var) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Var;
  n->var = var;
  return n;
}
inline bool is_const(const E& e, const Rational& v) { return e->op == Node::Op::Const && e->value == v; }

inline E operator+(const E& a, const E& b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a->op == Node::Op::Const && b->op == Node::Op::Const) return c(a->value + b->value);
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Add;
  n->a = a;
  n->b = b;
  return n;
}
inline E operator*(const E& a, const E& b) {
  if (is_const(a, 0) || is_const(b, 0)) return c(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (a->op == Node::Op::Const && b->op == Node::Op::Const) return c(a->value * b->value);
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Mul;
  n->a = a;
  n->b = b;
  return n;
}
inline E operator-(const E& a) { return c(-1) * a; }
inline E operator-(const E& a, const E& b) { return a + (-b); }
inline E operator/(const E& a, const E& b) {
  if (is_const(a, 0)) return c(0);
  if (is_const(b, 1)) return a;
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Div;
  n->a = a;
  n->b = b;
  return n;
}
inline E pow(const E& a, unsigned k) {
  if (k == 0) return c(1);
  if (k == 1) return a;
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Pow;
  n->a = a;
  n->power = k;
  return n;
}

inline E d(const E& e, int var) {
  switch (e->op) {
    case Node::Op::Const: return c(0);
    case Node::Op::Var: return c(e->var == var ? 1 : 0);
    case Node::Op::Add: return d(e->a, var) + d(e->b, var);
    case Node::Op::Mul: return d(e->a, var) * e->b + e->a * d(e->b, var);
    case Node::Op::Div: return (d(e->a, var) * e->b - e->a * d(e->b, var)) / pow(e->b, 2);
    case Node::Op::Pow: return c(static_cast<long>(e->power)) * pow(e->a, e->power - 1) * d(e->a, var);
  }
  return c(0);
}

inline Rational eval(const E& e, const std::vector<Rational>& p) {
  switch (e->op) {
    case Node::Op::Const: return e->value;
    case Node::Op::Var: return p.at(static_cast<std::size_t>(e->var));
    case Node::Op::Add: return eval(e->a, p) + eval(e->b, p);
    case Node::Op::Mul: return eval(e->a, p) * eval(e->b, p);
    case Node::Op::Div: return eval(e->a, p) / eval(e->b, p);
    case Node::Op::Pow: return tk::pow(eval(e->a, p), e->power);
  }
  return Rational(0);
}

/// d^alpha e for a multi-index of exponents.
inline E d(E e, const std::vector<int>& alpha) {
  for (std::size_t v = 0; v < alpha.size(); ++v)
    for (int k = 0; k < alpha[v]; ++k) e = d(e, static_cast<int>(v));
  return e;
}

/// Christoffel symbols Gamma^i_{jk} of a diagonal metric diag(h_0, .., h_{n-1}),
/// indexed (i * n + j) * n + k.
inline std::vector<E> diagonal_christoffel(const std::vector<E>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<E> g(static_cast<std::size_t>(n * n * n), c(0));
  auto H = [&](int i) { return h[static_cast<std::size_t>(i)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // 1/2 h_i^-1 (d_j g_ik + d_k g_ij - d_i g_jk)
        E s = c(0);
        if (i == k) s = s + d(H(i), j);
        if (i == j) s = s + d(H(i), k);
        if (j == k) s = s - d(H(j), i);
        g[static_cast<std::size_t>((i * n + j) * n + k)] = c(Rational(1, 2)) * s / H(i);
      }
  return g;
}

/// R_{ab}^c_d from Christoffel expressions, indexed ((a * n + b) * n + c) * n + d.
inline std::vector<E> riemann(const std::vector<E>& gamma, int n) {
  auto G = [&](int i, int j, int k) { return gamma[static_cast<std::size_t>((i * n + j) * n + k)]; };
  std::vector<E> r(static_cast<std::size_t>(n * n * n * n), c(0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int dd = 0; dd < n; ++dd) {
          E s = d(G(cc, b, dd), a) - d(G(cc, a, dd), b);
          for (int e = 0; e < n; ++e) s = s + G(cc, a, e) * G(e, b, dd) - G(cc, b, e) * G(e, a, dd);
          r[static_cast<std::size_t>(((a * n + b) * n + cc) * n + dd)] = s;
        }
  return r;
}

}  // namespace sym
