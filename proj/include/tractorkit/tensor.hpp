#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tractorkit/jet.hpp"

namespace tk {

enum class Variance : std::uint8_t { Up, Down };

/// One index slot: its variance and its range. Tangent indices range over n,
/// projective tractor indices over n + 1, conformal tractor indices over n + 2.
struct Slot {
  Variance variance;
  int extent;

  friend bool operator==(const Slot&, const Slot&) = default;
};

enum class Symmetry : std::uint8_t { Symmetric, Antisymmetric };

struct SymmetryStamp {
  Symmetry kind;
  int first;
  int second;

  friend bool operator==(const SymmetryStamp&, const SymmetryStamp&) = default;
};

using BasePoint = std::shared_ptr<const std::vector<Rational>>;

/// Dense array of jets with declared slot variances and a projective weight.
///
/// The weight is bookkeeping only: densities are trivialized by the chart, so
/// a weight-w tensor stores its components against that trivialization. The
/// shape is fixed at construction; components are stored row-major.
template <class T>
class Tensor {
 public:
  using JetT = Jet<T>;

  Tensor() = default;
  Tensor(int dim, std::vector<Slot> slots, int weight = 0);

  /// Slots given as a variance string such as "udd", all of extent dim.
  static Tensor of(int dim, std::string_view variances, int weight = 0);
  static Tensor scalar(int dim, JetT value, int weight = 0);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  const Slot& slot(int s) const { return slots_.at(static_cast<std::size_t>(s)); }
  int weight() const { return weight_; }
  void set_weight(int w) { weight_ = w; }
  const BasePoint& point() const { return point_; }
  void set_point(BasePoint p) { point_ = std::move(p); }
  const std::vector<SymmetryStamp>& stamps() const { return stamps_; }

  std::size_t size() const { return data_.size(); }
  JetT& operator[](std::size_t flat) { return data_[flat]; }
  const JetT& operator[](std::size_t flat) const { return data_[flat]; }
  std::span<JetT> data() { return data_; }
  std::span<const JetT> data() const { return data_; }

  std::size_t flat_index(std::span<const int> idx) const;
  std::vector<int> multi_index(std::size_t flat) const;
  std::size_t stride(int s) const { return strides_[static_cast<std::size_t>(s)]; }

  JetT& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
  const JetT& at(std::span<const int> idx) const { return data_[flat_index(idx)]; }
  template <class... I>
  JetT& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  const JetT& operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  bool is_zero() const;
  double max_abs() const;
  /// Lowest jet order among non-constant components (kConstantOrder if none).
  int min_order() const;
  Tensor truncated(int order) const;
  /// Component values at the base point as order-0 data.
  Tensor values() const { return truncated(0); }

  /// Checks the declared symmetry componentwise (exact, or within tol times
  /// the largest component on the float ring) and records it. Throws
  /// PreconditionViolation when it does not hold.
  void stamp(SymmetryStamp s, double tol = 0.0);
  /// Re-checks all recorded stamps.
  void verify_stamps(double tol = 0.0) const;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(const T& s);
  Tensor& operator*=(const JetT& s);
  Tensor operator-() const;

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, const T& s) { return a *= s; }
  friend Tensor operator*(const T& s, Tensor a) { return a *= s; }
  friend Tensor operator*(Tensor a, const JetT& s) { return a *= s; }
  friend Tensor operator*(const JetT& s, Tensor a) { return a *= s; }

  /// Same shape and identical components (jet orders included).
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.dim_ == b.dim_ && a.slots_ == b.slots_ && a.data_ == b.data_;
  }

 private:
  template <class... I>
  std::size_t offset(I... idx) const {
    static_assert(sizeof...(I) > 0);
    std::size_t off = 0, s = 0;
    ((off += strides_[s++] * static_cast<std::size_t>(idx)), ...);
    return off;
  }
  void check_same_shape(const Tensor& o, const char* what) const;

  int dim_ = 0;
  int weight_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::size_t> strides_;
  std::vector<JetT> data_;
  std::vector<SymmetryStamp> stamps_;
  BasePoint point_;
};

/// Calls f(idx) for every multi-index of the given extents, last index fastest.
template <class F>
void for_each_index(std::span<const int> extents, F&& f) {
  std::vector<int> idx(extents.size(), 0);
  for (int e : extents)
    if (e <= 0) return;
  while (true) {
    f(std::span<const int>(idx));
    int s = static_cast<int>(idx.size()) - 1;
    while (s >= 0 && ++idx[static_cast<std::size_t>(s)] == extents[static_cast<std::size_t>(s)]) {
      idx[static_cast<std::size_t>(s)] = 0;
      --s;
    }
    if (s < 0) return;
  }
}

/// Sign of a permutation of 0..k-1 given as a vector; 0 if not a permutation.
int permutation_sign(std::span<const int> perm);

/// a (x) b; weights add.
template <class T>
Tensor<T> tensor_product(const Tensor<T>& a, const Tensor<T>& b);

/// Trace over an Up slot and a Down slot of equal extent.
template <class T>
Tensor<T> contract(const Tensor<T>& a, int up_slot, int down_slot);

/// sum over shared indices of a (x) b for each (slot of a, slot of b) pair,
/// without materialising the outer product. Result slots: free slots of a in
/// order, then free slots of b in order. Paired slots must have opposite
/// variance and equal extent.
template <class T>
Tensor<T> contract_product(const Tensor<T>& a, const Tensor<T>& b, std::span<const std::pair<int, int>> pairs);
template <class T>
Tensor<T> contract_product(const Tensor<T>& a, const Tensor<T>& b, std::initializer_list<std::pair<int, int>> pairs) {
  return contract_product(a, b, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

/// Weighted alternation (1/k!) and symmetrization over the given slots.
template <class T>
Tensor<T> alternate(const Tensor<T>& a, std::span<const int> slots);
template <class T>
Tensor<T> symmetrize(const Tensor<T>& a, std::span<const int> slots);
template <class T>
Tensor<T> alternate(const Tensor<T>& a, std::initializer_list<int> slots) {
  return alternate(a, std::span<const int>(slots.begin(), slots.size()));
}
template <class T>
Tensor<T> symmetrize(const Tensor<T>& a, std::initializer_list<int> slots) {
  return symmetrize(a, std::span<const int>(slots.begin(), slots.size()));
}

/// Reorders slots: slot s of the result is slot perm[s] of a.
template <class T>
Tensor<T> permute(const Tensor<T>& a, std::span<const int> perm);
template <class T>
Tensor<T> permute(const Tensor<T>& a, std::initializer_list<int> perm) {
  return permute(a, std::span<const int>(perm.begin(), perm.size()));
}

/// Coordinate partial derivative; the new Down slot comes first.
template <class T>
Tensor<T> partial_derivative(const Tensor<T>& a);

/// Kronecker delta delta^a_b over the given extent.
template <class T>
Tensor<T> delta(int dim, int extent);
template <class T>
Tensor<T> delta(int dim) {
  return delta<T>(dim, dim);
}

/// Coordinate Levi-Civita symbol with all slots Up (weight n + 1) or all Down
/// (weight -(n + 1)); epsilon_{0..n-1} = 1.
template <class T>
Tensor<T> epsilon(int dim, Variance v);

/// Dual of a k-form: (*a)^{b_1..b_{n-k}} = (1/k!) a_{c_1..c_k} eps^{c_1..c_k b_1..b_{n-k}}.
/// With this normalisation *eps = 1 and ** = (-1)^{k(n-k)} on k-forms after
/// lowering with eps_{...}. The weight tag rises by n + 1.
template <class T>
Tensor<T> hodge_dual(const Tensor<T>& form);

/// Componentwise conversion of an exact tensor to the float ring.
Tensor<double> to_float(const Tensor<Rational>& a);
Jet<double> to_float(const Jet<Rational>& a);

using ExactTensor = Tensor<Rational>;
using FloatTensor = Tensor<double>;

extern template class Tensor<Rational>;
extern template class Tensor<double>;

}  // namespace tk
