#include "tractorkit/generators.hpp"

#include <algorithm>
#include <numeric>

#include "tractorkit/curvature.hpp"

namespace tk {

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != dim_) throw DimensionMismatch("monomial length differs from polynomial dimension");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial d(dim_);
  for (const auto& [m, c] : terms_) {
    const int e = m[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial dm = m;
    --dm[static_cast<std::size_t>(var)];
    d.add_term(dm, c * Rational(e));
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::string coef = c.is_integer() ? c.numerator().get_str() : c.to_string();
    std::string mono;
    for (int v = 0; v < dim_; ++v) {
      const int e = m[static_cast<std::size_t>(v)];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(v + 1);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += coef;
    else if (coef == "1")
      out += mono;
    else if (coef == "-1")
      out += "-" + mono;
    else
      out += coef + "*" + mono;
  }
  return out;
}

namespace {

void monomials_up_to(int dim, int degree, std::vector<Polynomial::Monomial>& out) {
  Polynomial::Monomial m(static_cast<std::size_t>(dim), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim) {
      out.push_back(m);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      m[static_cast<std::size_t>(pos)] = e;
      self(self, pos + 1, remaining - e);
    }
    m[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, degree);
}

}  // namespace

Polynomial Polynomial::random(int dim, int degree, std::mt19937_64& rng) {
  std::vector<Monomial> monos;
  monomials_up_to(dim, degree, monos);
  Polynomial p(dim);
  for (const auto& m : monos) {
    const std::uint64_t r = rng();
    if (r & 1u) continue;
    const long c = static_cast<long>((r >> 1) % 5) - 2;
    p.add_term(m, Rational(c));
  }
  return p;
}

// ---------------------------------------------------------------------------

std::string weyl_type_violation(const Tensor<Rational>& A) {
  const int n = A.dim();
  if (A.slots() != std::vector<Slot>{{Variance::Down, n}, {Variance::Down, n}, {Variance::Up, n}, {Variance::Down, n}})
    return "tensor does not have slots A_{ab}^c_d";
  auto v = [&](int a, int b, int c, int d) { return A(a, b, c, d).value(); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (v(a, b, c, d) + v(b, a, c, d) != Rational(0)) return "not skew in the first two indices";
          if (v(a, b, c, d) + v(b, d, c, a) + v(d, a, c, b) != Rational(0)) return "first Bianchi identity fails";
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Rational t1, t2;
      for (int c = 0; c < n; ++c) {
        t1 += v(a, b, c, c);
        t2 += v(a, c, c, b);
      }
      if (!t1.is_zero()) return "trace A_{ab}^c_c is nonzero";
      if (!t2.is_zero()) return "trace A_{ac}^c_b is nonzero";
    }
  return {};
}

ConnectionSource generate_prescribed_weyl(const Tensor<Rational>& A) {
  if (const std::string why = weyl_type_violation(A); !why.empty())
    throw PreconditionViolation("prescribed Weyl tensor: " + why);
  const int n = A.dim();
  auto v = [&](int a, int b, int c, int d) { return A(a, b, c, d).value(); };
  std::vector<Expr> gamma;
  gamma.reserve(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Polynomial p(n);
        for (int a = 0; a < n; ++a) {
          // S_{aj}^i_k = A_{aj}^i_k + A_{ak}^i_j
          const Rational s = (v(a, j, i, k) + v(a, k, i, j)) * Rational(1, 3);
          Polynomial::Monomial m(static_cast<std::size_t>(n), 0);
          m[static_cast<std::size_t>(a)] = 1;
          p.add_term(m, s);
        }
        gamma.push_back(p.to_expr());
      }
  return ConnectionSource::christoffel(n, std::move(gamma), "prescribed-weyl");
}

Tensor<Rational> random_weyl_tensor(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ConnectionSource src = random_polynomial_connection(n, 1, rng);
  const Tensor<Rational> gamma = christoffel_jet<Rational>(src, Point(static_cast<std::size_t>(n), Rational(0)), 1);
  Tensor<Rational> W = projective_curvature(gamma).W;
  Tensor<Rational> out(n, W.slots());
  for (std::size_t f = 0; f < W.size(); ++f) out[f] = Jet<Rational>(W[f].value());
  return out;
}

std::optional<OmegaB> omega_b(int n, int k, bool require_nonzero_trace) {
  const int m = n - 2 * k;
  if (k < 1 || m < 0) return std::nullopt;
  std::vector<Rational> eig(static_cast<std::size_t>(m), Rational(0));
  if (m >= 3 && k % 2 == 1) {
    for (int i = 0; i + 1 < m; ++i) eig[static_cast<std::size_t>(i)] = Rational(1);
    eig[static_cast<std::size_t>(m - 1)] = Rational(-(m - 1));
  } else if (m >= 2) {
    eig[0] = Rational(1);
    eig[1] = Rational(-1);
  }
  Rational tr;
  for (const auto& e : eig) tr += pow(e, static_cast<unsigned>(k));
  if (require_nonzero_trace && tr.is_zero()) return std::nullopt;

  OmegaB ob;
  ob.trace_power = tr;
  ob.omega = Tensor<Rational>::of(n, "dd");
  for (int i = 0; i < k; ++i) {
    ob.omega(2 * i, 2 * i + 1) = Jet<Rational>(Rational(1));
    ob.omega(2 * i + 1, 2 * i) = Jet<Rational>(Rational(-1));
  }
  ob.B = Tensor<Rational>::of(n, "ud");
  for (int i = 0; i < m; ++i) ob.B(2 * k + i, 2 * k + i) = Jet<Rational>(eig[static_cast<std::size_t>(i)]);

  ob.A = Tensor<Rational>::of(n, "ddud");
  auto w = [&](int a, int b) { return ob.omega(a, b).value(); };
  auto B = [&](int c, int d) { return ob.B(c, d).value(); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Rational val = Rational(2) * w(a, b) * B(c, d) - w(d, a) * B(c, b) - w(b, d) * B(c, a);
          if (!val.is_zero()) ob.A(a, b, c, d) = Jet<Rational>(val);
        }

  std::vector<int> perm(static_cast<std::size_t>(2 * k));
  std::iota(perm.begin(), perm.end(), 0);
  Rational wedge;
  do {
    Rational prod(permutation_sign(perm));
    for (int i = 0; i < k && !prod.is_zero(); ++i) prod *= w(perm[static_cast<std::size_t>(2 * i)], perm[static_cast<std::size_t>(2 * i + 1)]);
    wedge += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  ob.omega_wedge = wedge;
  return ob;
}

std::optional<Tensor<Rational>> omega_b_weyl(int n, int k) {
  auto ob = omega_b(n, k);
  if (!ob) return std::nullopt;
  return ob->A;
}

ConnectionSource random_polynomial_connection(int n, int degree, std::mt19937_64& rng, bool scale) {
  std::vector<Polynomial> g(static_cast<std::size_t>(n * n * n), Polynomial(n));
  auto at = [&](int i, int j, int k) -> Polynomial& { return g[static_cast<std::size_t>((i * n + j) * n + k)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        at(i, j, k) = Polynomial::random(n, degree, rng);
        at(i, k, j) = at(i, j, k);
      }
  if (scale) {
    // Shift by Upsilon = -trace / (n + 1) so that Gamma^c_{ac} = 0.
    for (int a = 0; a < n; ++a) {
      Polynomial u(n);
      for (int c = 0; c < n; ++c) u += at(c, a, c);
      u *= Rational(-1, n + 1);
      for (int i = 0; i < n; ++i) {
        at(i, a, i) += u;
        if (i != a)
          at(i, i, a) += u;
        else
          at(i, a, i) += u;
      }
    }
  }
  std::vector<Expr> exprs;
  exprs.reserve(g.size());
  for (const auto& p : g) exprs.push_back(p.to_expr());
  return ConnectionSource::christoffel(n, std::move(exprs), scale ? "random-scale-polynomial" : "random-polynomial");
}

OneFormField random_polynomial_one_form(int n, int degree, std::mt19937_64& rng, bool exact) {
  OneFormField u;
  if (exact) {
    const Polynomial phi = Polynomial::random(n, degree + 1, rng);
    for (int i = 0; i < n; ++i) u.components.push_back(phi.derivative(i).to_expr());
  } else {
    for (int i = 0; i < n; ++i) u.components.push_back(Polynomial::random(n, degree, rng).to_expr());
  }
  return u;
}

}  // namespace tk
