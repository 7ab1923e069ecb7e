#include "tractorkit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tk {

namespace {

std::vector<int> extents_of(const std::vector<Slot>& slots) {
  std::vector<int> e;
  e.reserve(slots.size());
  for (const auto& s : slots) e.push_back(s.extent);
  return e;
}

BasePoint merge_points(const BasePoint& a, const BasePoint& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (*a != *b) throw DimensionMismatch("tensors live at different base points");
  return a;
}

void check_slot(int rank, int s) {
  if (s < 0 || s >= rank) throw DimensionMismatch("slot index " + std::to_string(s) + " out of range");
}

}  // namespace

int permutation_sign(std::span<const int> perm) {
  const std::size_t k = perm.size();
  std::vector<bool> seen(k, false);
  int sign = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (perm[i] < 0 || static_cast<std::size_t>(perm[i]) >= k) return 0;
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return 0;
  return sign;
}

template <class T>
Tensor<T>::Tensor(int dim, std::vector<Slot> slots, int weight)
    : dim_(dim), weight_(weight), slots_(std::move(slots)) {
  if (dim < 1) throw DimensionMismatch("tensor dimension must be positive");
  strides_.assign(slots_.size(), 1);
  std::size_t total = 1;
  for (std::size_t s = slots_.size(); s-- > 0;) {
    if (slots_[s].extent < 1) throw DimensionMismatch("slot extent must be positive");
    strides_[s] = total;
    total *= static_cast<std::size_t>(slots_[s].extent);
  }
  data_.assign(total, JetT());
}

template <class T>
Tensor<T> Tensor<T>::of(int dim, std::string_view variances, int weight) {
  std::vector<Slot> slots;
  for (char c : variances) {
    if (c == 'u' || c == 'U')
      slots.push_back({Variance::Up, dim});
    else if (c == 'd' || c == 'D')
      slots.push_back({Variance::Down, dim});
    else
      throw DimensionMismatch(std::string("unknown variance letter '") + c + "'");
  }
  return Tensor(dim, std::move(slots), weight);
}

template <class T>
Tensor<T> Tensor<T>::scalar(int dim, JetT value, int weight) {
  Tensor t(dim, {}, weight);
  t.data_[0] = std::move(value);
  return t;
}

template <class T>
std::size_t Tensor<T>::flat_index(std::span<const int> idx) const {
  if (idx.size() != slots_.size()) throw DimensionMismatch("index count differs from tensor rank");
  std::size_t off = 0;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    if (idx[s] < 0 || idx[s] >= slots_[s].extent) throw DimensionMismatch("component index out of range");
    off += strides_[s] * static_cast<std::size_t>(idx[s]);
  }
  return off;
}

template <class T>
std::vector<int> Tensor<T>::multi_index(std::size_t flat) const {
  std::vector<int> idx(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    idx[s] = static_cast<int>(flat / strides_[s]);
    flat %= strides_[s];
  }
  return idx;
}

template <class T>
bool Tensor<T>::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const JetT& j) { return j.is_zero(); });
}

template <class T>
double Tensor<T>::max_abs() const {
  double m = 0.0;
  for (const auto& j : data_) m = std::max(m, j.max_abs());
  return m;
}

template <class T>
int Tensor<T>::min_order() const {
  int m = JetT::kConstantOrder;
  for (const auto& j : data_) m = std::min(m, j.order());
  return m;
}

template <class T>
Tensor<T> Tensor<T>::truncated(int order) const {
  Tensor out = *this;
  for (auto& j : out.data_) j = j.truncated(order);
  return out;
}

template <class T>
void Tensor<T>::stamp(SymmetryStamp s, double tol) {
  check_slot(rank(), s.first);
  check_slot(rank(), s.second);
  if (slots_[static_cast<std::size_t>(s.first)] != slots_[static_cast<std::size_t>(s.second)])
    throw DimensionMismatch("symmetry stamp on slots of different type");
  stamps_.push_back(s);
  try {
    verify_stamps(tol);
  } catch (...) {
    stamps_.pop_back();
    throw;
  }
}

template <class T>
void Tensor<T>::verify_stamps(double tol) const {
  const double bound = tol * max_abs();
  for (const auto& st : stamps_) {
    const auto a = static_cast<std::size_t>(st.first);
    const auto b = static_cast<std::size_t>(st.second);
    for (std::size_t f = 0; f < data_.size(); ++f) {
      auto idx = multi_index(f);
      if (idx[a] >= idx[b]) continue;
      std::swap(idx[a], idx[b]);
      const JetT& other = data_[flat_index(idx)];
      const JetT residual = st.kind == Symmetry::Symmetric ? data_[f] - other : data_[f] + other;
      const bool ok = RingTraits<T>::exact || tol == 0.0 ? residual.is_zero() : residual.max_abs() <= bound;
      if (!ok)
        throw PreconditionViolation(std::string("declared ") +
                                    (st.kind == Symmetry::Symmetric ? "symmetry" : "antisymmetry") +
                                    " in slots " + std::to_string(st.first) + "," + std::to_string(st.second) +
                                    " does not hold");
    }
  }
}

template <class T>
void Tensor<T>::check_same_shape(const Tensor& o, const char* what) const {
  if (dim_ != o.dim_ || slots_ != o.slots_) throw DimensionMismatch(std::string(what) + " of tensors with different shapes");
}

template <class T>
Tensor<T>& Tensor<T>::operator+=(const Tensor& o) {
  check_same_shape(o, "sum");
  point_ = merge_points(point_, o.point_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <class T>
Tensor<T>& Tensor<T>::operator-=(const Tensor& o) {
  check_same_shape(o, "difference");
  point_ = merge_points(point_, o.point_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <class T>
Tensor<T>& Tensor<T>::operator*=(const T& s) {
  for (auto& j : data_) j *= s;
  return *this;
}

template <class T>
Tensor<T>& Tensor<T>::operator*=(const JetT& s) {
  for (auto& j : data_) j *= s;
  return *this;
}

template <class T>
Tensor<T> Tensor<T>::operator-() const {
  Tensor out = *this;
  for (auto& j : out.data_) j = -j;
  return out;
}

template class Tensor<Rational>;
template class Tensor<double>;

// ---------------------------------------------------------------------------

template <class T>
Tensor<T> tensor_product(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("tensor product of different dimensions");
  std::vector<Slot> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  Tensor<T> out(a.dim(), std::move(slots), a.weight() + b.weight());
  out.set_point(merge_points(a.point(), b.point()));
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < nb; ++j)
      if (!b[j].is_zero()) out[i * nb + j] = a[i] * b[j];
  }
  return out;
}

template <class T>
Tensor<T> contract(const Tensor<T>& a, int up_slot, int down_slot) {
  check_slot(a.rank(), up_slot);
  check_slot(a.rank(), down_slot);
  const Slot& su = a.slot(up_slot);
  const Slot& sd = a.slot(down_slot);
  if (up_slot == down_slot || su.variance != Variance::Up || sd.variance != Variance::Down)
    throw DimensionMismatch("contraction needs one Up and one Down slot");
  if (su.extent != sd.extent) throw DimensionMismatch("contraction over slots of different extent");
  std::vector<Slot> slots;
  std::vector<int> keep;
  for (int s = 0; s < a.rank(); ++s)
    if (s != up_slot && s != down_slot) {
      slots.push_back(a.slot(s));
      keep.push_back(s);
    }
  Tensor<T> out(a.dim(), slots, a.weight());
  out.set_point(a.point());
  std::vector<int> ext = extents_of(slots);
  std::vector<int> full(static_cast<std::size_t>(a.rank()));
  std::size_t f = 0;
  for_each_index(std::span<const int>(ext), [&](std::span<const int> idx) {
    for (std::size_t i = 0; i < keep.size(); ++i) full[static_cast<std::size_t>(keep[i])] = idx[i];
    Jet<T> acc;
    for (int t = 0; t < su.extent; ++t) {
      full[static_cast<std::size_t>(up_slot)] = t;
      full[static_cast<std::size_t>(down_slot)] = t;
      acc += a.at(full);
    }
    out[f++] = std::move(acc);
  });
  return out;
}

template <class T>
Tensor<T> contract_product(const Tensor<T>& a, const Tensor<T>& b, std::span<const std::pair<int, int>> pairs) {
  if (a.dim() != b.dim()) throw DimensionMismatch("contraction of tensors of different dimensions");
  std::vector<bool> a_used(static_cast<std::size_t>(a.rank()), false), b_used(static_cast<std::size_t>(b.rank()), false);
  std::vector<int> sum_ext;
  for (const auto& [sa, sb] : pairs) {
    check_slot(a.rank(), sa);
    check_slot(b.rank(), sb);
    if (a_used[static_cast<std::size_t>(sa)] || b_used[static_cast<std::size_t>(sb)])
      throw DimensionMismatch("slot contracted twice");
    a_used[static_cast<std::size_t>(sa)] = b_used[static_cast<std::size_t>(sb)] = true;
    if (a.slot(sa).variance == b.slot(sb).variance) throw DimensionMismatch("contraction of two slots of equal variance");
    if (a.slot(sa).extent != b.slot(sb).extent) throw DimensionMismatch("contraction over slots of different extent");
    sum_ext.push_back(a.slot(sa).extent);
  }
  std::vector<Slot> slots;
  std::vector<std::size_t> a_free_stride, b_free_stride;
  for (int s = 0; s < a.rank(); ++s)
    if (!a_used[static_cast<std::size_t>(s)]) {
      slots.push_back(a.slot(s));
      a_free_stride.push_back(a.stride(s));
      b_free_stride.push_back(0);
    }
  for (int s = 0; s < b.rank(); ++s)
    if (!b_used[static_cast<std::size_t>(s)]) {
      slots.push_back(b.slot(s));
      a_free_stride.push_back(0);
      b_free_stride.push_back(b.stride(s));
    }
  Tensor<T> out(a.dim(), slots, a.weight() + b.weight());
  out.set_point(merge_points(a.point(), b.point()));

  // Offsets of every summed index combination, precomputed once.
  std::vector<std::size_t> a_sum_off, b_sum_off;
  for_each_index(std::span<const int>(sum_ext), [&](std::span<const int> idx) {
    std::size_t oa = 0, ob = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      oa += a.stride(pairs[p].first) * static_cast<std::size_t>(idx[p]);
      ob += b.stride(pairs[p].second) * static_cast<std::size_t>(idx[p]);
    }
    a_sum_off.push_back(oa);
    b_sum_off.push_back(ob);
  });

  const std::vector<int> ext = extents_of(slots);
  std::size_t f = 0;
  for_each_index(std::span<const int>(ext), [&](std::span<const int> idx) {
    std::size_t base_a = 0, base_b = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      base_a += a_free_stride[s] * static_cast<std::size_t>(idx[s]);
      base_b += b_free_stride[s] * static_cast<std::size_t>(idx[s]);
    }
    Jet<T> acc;
    for (std::size_t q = 0; q < a_sum_off.size(); ++q) {
      const Jet<T>& x = a[base_a + a_sum_off[q]];
      if (x.is_zero()) continue;
      const Jet<T>& y = b[base_b + b_sum_off[q]];
      if (y.is_zero()) continue;
      acc += x * y;
    }
    out[f++] = std::move(acc);
  });
  return out;
}

namespace {

template <class T>
Tensor<T> weighted_permutation_sum(const Tensor<T>& a, std::span<const int> slots, bool signed_sum) {
  if (slots.empty()) return a;
  for (int s : slots) {
    check_slot(a.rank(), s);
    if (a.slot(s) != a.slot(slots[0])) throw DimensionMismatch("(anti)symmetrization over slots of different type");
  }
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  Tensor<T> out(a.dim(), a.slots(), a.weight());
  out.set_point(a.point());
  std::vector<int> src;
  do {
    const int sign = signed_sum ? permutation_sign(perm) : 1;
    for (std::size_t f = 0; f < a.size(); ++f) {
      auto idx = a.multi_index(f);
      src = idx;
      for (std::size_t i = 0; i < slots.size(); ++i)
        src[static_cast<std::size_t>(slots[i])] = idx[static_cast<std::size_t>(slots[static_cast<std::size_t>(perm[i])])];
      const Jet<T>& v = a.at(src);
      if (v.is_zero()) continue;
      if (sign > 0)
        out[f] += v;
      else
        out[f] -= v;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out *= RingTraits<T>::from_rational(factorial(static_cast<unsigned>(slots.size())).reciprocal());
  return out;
}

}  // namespace

template <class T>
Tensor<T> alternate(const Tensor<T>& a, std::span<const int> slots) {
  return weighted_permutation_sum(a, slots, true);
}

template <class T>
Tensor<T> symmetrize(const Tensor<T>& a, std::span<const int> slots) {
  return weighted_permutation_sum(a, slots, false);
}

template <class T>
Tensor<T> permute(const Tensor<T>& a, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != a.rank() || permutation_sign(perm) == 0)
    throw DimensionMismatch("slot permutation does not match tensor rank");
  std::vector<Slot> slots;
  for (int p : perm) slots.push_back(a.slot(p));
  Tensor<T> out(a.dim(), slots, a.weight());
  out.set_point(a.point());
  std::vector<int> src(perm.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto idx = out.multi_index(f);
    for (std::size_t s = 0; s < perm.size(); ++s) src[static_cast<std::size_t>(perm[s])] = idx[s];
    out[f] = a.at(src);
  }
  return out;
}

template <class T>
Tensor<T> partial_derivative(const Tensor<T>& a) {
  std::vector<Slot> slots{{Variance::Down, a.dim()}};
  slots.insert(slots.end(), a.slots().begin(), a.slots().end());
  Tensor<T> out(a.dim(), std::move(slots), a.weight());
  out.set_point(a.point());
  for (int i = 0; i < a.dim(); ++i)
    for (std::size_t f = 0; f < a.size(); ++f) out[static_cast<std::size_t>(i) * a.size() + f] = a[f].partial(i);
  return out;
}

template <class T>
Tensor<T> delta(int dim, int extent) {
  Tensor<T> d(dim, {{Variance::Up, extent}, {Variance::Down, extent}});
  for (int i = 0; i < extent; ++i) d(i, i) = Jet<T>(T(1));
  return d;
}

template <class T>
Tensor<T> epsilon(int dim, Variance v) {
  Tensor<T> e(dim, std::vector<Slot>(static_cast<std::size_t>(dim), Slot{v, dim}),
              v == Variance::Up ? dim + 1 : -(dim + 1));
  std::vector<int> perm(static_cast<std::size_t>(dim));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    e.at(perm) = Jet<T>(T(permutation_sign(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return e;
}

template <class T>
Tensor<T> hodge_dual(const Tensor<T>& form) {
  const int n = form.dim();
  const int k = form.rank();
  if (k > n) throw DimensionMismatch("form degree exceeds dimension");
  if (k == 0) {
    // Dual of a function: f eps with the opposite variance convention (lower).
    Tensor<T> e = epsilon<T>(n, Variance::Down);
    e *= form[0];
    e.set_weight(form.weight() + e.weight());
    e.set_point(form.point());
    return e;
  }
  const Variance v = form.slot(0).variance;
  for (int s = 0; s < k; ++s)
    if (form.slot(s) != Slot{v, n}) throw DimensionMismatch("hodge dual needs a form with uniform tangent slots");
  for (int s = 1; s < k; ++s) {
    // Antisymmetry of each adjacent pair implies full antisymmetry.
    Tensor<T> probe = form;
    probe.stamp({Symmetry::Antisymmetric, s - 1, s}, RingTraits<T>::exact ? 0.0 : 1e-12);
  }
  const Variance dual_v = v == Variance::Down ? Variance::Up : Variance::Down;
  Tensor<T> e = epsilon<T>(n, dual_v);
  std::vector<std::pair<int, int>> pairs;
  for (int s = 0; s < k; ++s) pairs.push_back({s, s});
  Tensor<T> out = contract_product(form, e, std::span<const std::pair<int, int>>(pairs));
  out *= RingTraits<T>::from_rational(factorial(static_cast<unsigned>(k)).reciprocal());
  return out;
}

Jet<double> to_float(const Jet<Rational>& a) {
  std::vector<double> c;
  c.reserve(a.coefficients().size());
  for (const auto& v : a.coefficients()) c.push_back(v.to_double());
  if (a.is_constant()) return Jet<double>(c[0]);
  return Jet<double>::from_coefficients(*a.layout(), std::move(c));
}

Tensor<double> to_float(const Tensor<Rational>& a) {
  Tensor<double> out(a.dim(), a.slots(), a.weight());
  out.set_point(a.point());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = to_float(a[i]);
  return out;
}

#define TK_INSTANTIATE_TENSOR_OPS(T)                                                                        \
  template Tensor<T> tensor_product(const Tensor<T>&, const Tensor<T>&);                                    \
  template Tensor<T> contract(const Tensor<T>&, int, int);                                                  \
  template Tensor<T> contract_product(const Tensor<T>&, const Tensor<T>&, std::span<const std::pair<int, int>>); \
  template Tensor<T> alternate(const Tensor<T>&, std::span<const int>);                                     \
  template Tensor<T> symmetrize(const Tensor<T>&, std::span<const int>);                                    \
  template Tensor<T> permute(const Tensor<T>&, std::span<const int>);                                       \
  template Tensor<T> partial_derivative(const Tensor<T>&);                                                  \
  template Tensor<T> delta(int, int);                                                                       \
  template Tensor<T> epsilon(int, Variance);                                                                \
  template Tensor<T> hodge_dual(const Tensor<T>&);

TK_INSTANTIATE_TENSOR_OPS(Rational)
TK_INSTANTIATE_TENSOR_OPS(double)

#undef TK_INSTANTIATE_TENSOR_OPS

}  // namespace tk
