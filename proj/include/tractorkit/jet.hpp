#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tractorkit/scalar.hpp"

namespace tk {

/// Christoffel jets are carried to order 4; metric jets need one more order
/// because the Levi-Civita connection differentiates the metric once.
inline constexpr int kMaxChristoffelOrder = 4;
inline constexpr int kMaxJetOrder = 5;

/// Monomial table shared by all jets of a given (dimension, order).
///
/// Multi-indices are ordered by total degree first, so the table of a lower
/// order is a prefix of every higher-order table. Truncation is therefore a
/// resize, and jets of different orders can be combined index-for-index.
/// Layouts are interned and live for the whole program.
class JetLayout {
 public:
  struct Term {
    std::uint32_t lhs;
    std::uint32_t rhs;
  };
  struct DerivEntry {
    std::uint32_t source;
    std::uint32_t factor;
  };

  static const JetLayout& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }
  /// Number of multi-indices with |alpha| <= k.
  std::size_t size_up_to(int k) const;

  std::span<const std::uint8_t> exponent(std::size_t idx) const {
    return {exponents_.data() + idx * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  int degree(std::size_t idx) const { return degree_[idx]; }
  /// Throws DimensionMismatch when alpha has the wrong length or degree.
  std::size_t index_of(std::span<const int> alpha) const;
  std::size_t unit_index(int var) const { return 1 + static_cast<std::size_t>(var); }
  /// alpha! for the multi-index at idx.
  std::uint64_t alpha_factorial(std::size_t idx) const { return alpha_factorial_[idx]; }

  /// All (i, j) with alpha_i + alpha_j = alpha_result.
  std::span<const Term> product_terms(std::size_t result) const {
    return {terms_.data() + term_offsets_[result], term_offsets_[result + 1] - term_offsets_[result]};
  }
  /// For d/dx_var: entry t maps the order-(k-1) coefficient t to its source
  /// coefficient in this layout and the integer factor alpha_var + 1.
  std::span<const DerivEntry> derivative_table(int var) const {
    const std::size_t m = size_up_to(order_ - 1);
    return {derivs_.data() + static_cast<std::size_t>(var) * m, m};
  }

 private:
  JetLayout(int dim, int order);
  std::uint64_t key(std::span<const std::uint8_t> alpha) const;
  std::size_t lookup(std::uint64_t k) const;

  int dim_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<std::uint64_t> alpha_factorial_;
  std::vector<std::uint64_t> sorted_keys_;
  std::vector<std::uint32_t> sorted_index_;
  std::vector<Term> terms_;
  std::vector<std::size_t> term_offsets_;
  std::vector<DerivEntry> derivs_;
};

/// Truncated multivariate Taylor expansion of a scalar field about a point.
///
/// Coefficient idx stores the Taylor coefficient d^alpha f(x0) / alpha!, so
/// products are plain truncated Cauchy products; derivative() converts back
/// to the partial derivative d^alpha f(x0). A jet without a layout is a
/// pure constant that combines with a jet of any dimension and order.
template <class T>
class Jet {
 public:
  using Scalar = T;
  static constexpr int kConstantOrder = std::numeric_limits<int>::max();

  Jet() : c_(1, T(0)) {}
  explicit Jet(T constant) : c_{std::move(constant)} {}
  explicit Jet(const JetLayout& layout) : layout_(&layout), c_(layout.size(), T(0)) {}

  static Jet constant(T v) { return Jet(std::move(v)); }
  /// The coordinate function x_var expanded about base_value.
  static Jet variable(const JetLayout& layout, int var, T base_value);
  static Jet from_coefficients(const JetLayout& layout, std::vector<T> coeffs);

  bool is_constant() const { return layout_ == nullptr; }
  const JetLayout* layout() const { return layout_; }
  int order() const { return layout_ ? layout_->order() : kConstantOrder; }
  const T& value() const { return c_[0]; }
  std::span<const T> coefficients() const { return c_; }
  const T& coefficient(std::size_t idx) const { return c_[idx]; }
  T& coefficient(std::size_t idx) { return c_[idx]; }

  /// d^alpha f(x0). Indices beyond the jet's order throw InsufficientOrder.
  T derivative(std::span<const int> alpha) const;
  /// Partial derivative d/dx_var; the order drops by exactly one.
  Jet partial(int var) const;
  Jet truncated(int order) const;
  /// A constant becomes a jet of the given layout; other jets are unchanged.
  Jet lifted(const JetLayout& layout) const;

  bool is_zero() const;
  /// Largest |coefficient| over the stored Taylor coefficients.
  double max_abs() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator*=(const T& s);
  Jet operator-() const;

  Jet reciprocal() const;
  Jet pow(unsigned exponent) const;

  /// f(this) from the scaled derivatives taylor[j] = f^(j)(x0) / j!.
  Jet compose(std::span<const T> taylor) const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) { return multiply(a, b); }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }

  /// Same order (or both constant) and identical coefficients.
  friend bool operator==(const Jet& a, const Jet& b) { return a.equals(b); }

 private:
  static Jet multiply(const Jet& a, const Jet& b);
  static const JetLayout* common_layout(const Jet& a, const Jet& b);
  bool equals(const Jet& o) const;

  const JetLayout* layout_ = nullptr;
  std::vector<T> c_;
};

using ExactJet = Jet<Rational>;
using FloatJet = Jet<double>;

// Elementary functions exist only on the floating ring; rational inputs
// would leave the exact field.
FloatJet sin(const FloatJet& x);
FloatJet cos(const FloatJet& x);
FloatJet exp(const FloatJet& x);
FloatJet log(const FloatJet& x);
FloatJet sqrt(const FloatJet& x);

extern template class Jet<Rational>;
extern template class Jet<double>;

}  // namespace tk
