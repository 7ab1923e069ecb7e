#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tractorkit/connection.hpp"

namespace tk {

/// Sparse multivariate polynomial with rational coefficients, used to build
/// test connections whose derivatives are known in closed form.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  void add_term(const Monomial& m, const Rational& c);
  Polynomial derivative(int var) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  bool is_zero() const { return terms_.empty(); }

  /// Text in the expression grammar, e.g. "3/2*x1^2*x3 - x2".
  std::string to_string() const;
  Expr to_expr() const { return Expr::parse(to_string(), dim_); }

  /// Every monomial of degree <= degree with an independent coefficient in
  /// {-2..2}, each left zero with probability about one half.
  static Polynomial random(int dim, int degree, std::mt19937_64& rng);

 private:
  int dim_ = 0;
  std::map<Monomial, Rational> terms_;
};

/// Checks the algebraic conditions on a Weyl-type tensor A_{ab}^c_d: skew in
/// ab, A_{ab}^c_c = A_{ac}^c_b = 0 and the first Bianchi identity. Returns an
/// empty string when all hold, else a description of the first failure.
std::string weyl_type_violation(const Tensor<Rational>& A);

/// Polynomial connection Gamma^i_{jk} = (1/3) S_{aj}^i_k x^a with
/// S_{ij}^k_l = A_{ij}^k_l + A_{il}^k_j; its projective Weyl tensor at the
/// origin is A and its Ricci tensor is symmetric. Throws PreconditionViolation
/// when A is not of Weyl type.
ConnectionSource generate_prescribed_weyl(const Tensor<Rational>& A);

/// Weyl part of the curvature of a random linear connection at the origin.
Tensor<Rational> random_weyl_tensor(int n, std::uint64_t seed);

/// Data of the w ^ B construction: a 2-form w of rank 2k, a trace-free
/// endomorphism B with image in ker w and tr(B^k) != 0, and the Weyl-type
/// tensor A_{ab}^c_d = 2 w_ab B_d^c - w_da B_b^c - w_bd B_a^c.
struct OmegaB {
  Tensor<Rational> omega;  // (Down, Down)
  Tensor<Rational> B;      // B_d^c stored with slots (Up c, Down d)
  Tensor<Rational> A;
  Rational trace_power;    // tr(B^k)
  Rational omega_wedge;    // sum over S_2k of sgn * prod w at (0, 1, ..., 2k-1)
};

/// Returns nothing when the conditions cannot be met: B must be trace-free
/// on ker w, which has dimension n - 2k, and tr(B^k) != 0 then needs
/// n - 2k >= 3 for odd k (n - 2k >= 2 for even k). With
/// require_nonzero_trace = false the best available B is used anyway
/// (diag(1, -1) on a 2-dimensional kernel), and tr(B^k) may vanish.
std::optional<OmegaB> omega_b(int n, int k, bool require_nonzero_trace = true);
std::optional<Tensor<Rational>> omega_b_weyl(int n, int k);

/// Random torsion-free polynomial connection of the given degree. With
/// scale = true the trace Gamma^c_{ac} is removed, so the coordinate volume
/// is parallel and the connection is a scale connection.
ConnectionSource random_polynomial_connection(int n, int degree, std::mt19937_64& rng, bool scale = false);

/// Random polynomial one-form; exact = true returns the differential of a
/// random polynomial of one degree higher.
OneFormField random_polynomial_one_form(int n, int degree, std::mt19937_64& rng, bool exact = false);

}  // namespace tk
