#include "tractorkit/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace tk {

namespace {

// Appends every exponent vector of total degree d in lexicographically
// descending order, so degree 1 comes out as e_0, e_1, ..., e_{n-1}.
void append_degree(int dim, int d, std::vector<std::uint8_t>& out) {
  std::vector<std::uint8_t> alpha(static_cast<std::size_t>(dim), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim - 1) {
      alpha[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(remaining);
      out.insert(out.end(), alpha.begin(), alpha.end());
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      alpha[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, d);
}

std::uint64_t small_factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  for (int d = 0; d <= order; ++d) append_degree(dim, d, exponents_);
  const std::size_t count = exponents_.size() / static_cast<std::size_t>(dim);
  degree_.resize(count);
  alpha_factorial_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    int deg = 0;
    std::uint64_t fact = 1;
    for (auto a : exponent(i)) {
      deg += a;
      fact *= small_factorial(a);
    }
    degree_[i] = deg;
    alpha_factorial_[i] = fact;
  }

  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(count);
  for (std::size_t i = 0; i < count; ++i) keyed[i] = {key(exponent(i)), static_cast<std::uint32_t>(i)};
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [k, i] : keyed) {
    sorted_keys_.push_back(k);
    sorted_index_.push_back(i);
  }

  // Product table, grouped by result index.
  std::vector<std::vector<Term>> by_result(count);
  std::vector<std::uint8_t> sum(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count && degree_[i] + degree_[j] <= order; ++j) {
      const auto a = exponent(i);
      const auto b = exponent(j);
      for (int v = 0; v < dim; ++v) sum[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(a[v] + b[v]);
      const std::size_t r = lookup(key(sum));
      by_result[r].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  term_offsets_.push_back(0);
  for (auto& terms : by_result) {
    terms_.insert(terms_.end(), terms.begin(), terms.end());
    term_offsets_.push_back(terms_.size());
  }

  if (order > 0) {
    const std::size_t m = size_up_to(order - 1);
    derivs_.resize(static_cast<std::size_t>(dim) * m);
    for (int var = 0; var < dim; ++var) {
      for (std::size_t t = 0; t < m; ++t) {
        std::vector<std::uint8_t> alpha(exponent(t).begin(), exponent(t).end());
        const std::uint32_t factor = alpha[static_cast<std::size_t>(var)] + 1u;
        alpha[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(factor);
        derivs_[static_cast<std::size_t>(var) * m + t] = {static_cast<std::uint32_t>(lookup(key(alpha))), factor};
      }
    }
  }
}

const JetLayout& JetLayout::get(int dim, int order) {
  if (dim < 1 || order < 0 || order > kMaxJetOrder)
    throw DimensionMismatch("jet layout out of range: dim " + std::to_string(dim) + ", order " +
                            std::to_string(order));
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, order}];
  if (!slot) slot.reset(new JetLayout(dim, order));
  return *slot;
}

std::size_t JetLayout::size_up_to(int k) const {
  if (k < 0) return 0;
  if (k >= order_) return size();
  return static_cast<std::size_t>(std::upper_bound(degree_.begin(), degree_.end(), k) - degree_.begin());
}

std::uint64_t JetLayout::key(std::span<const std::uint8_t> alpha) const {
  std::uint64_t k = 0;
  for (auto a : alpha) k = k * static_cast<std::uint64_t>(order_ + 1) + a;
  return k;
}

std::size_t JetLayout::lookup(std::uint64_t k) const {
  const auto it = std::lower_bound(sorted_keys_.begin(), sorted_keys_.end(), k);
  if (it == sorted_keys_.end() || *it != k) throw InsufficientOrder("multi-index beyond jet order");
  return sorted_index_[static_cast<std::size_t>(it - sorted_keys_.begin())];
}

std::size_t JetLayout::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) throw DimensionMismatch("multi-index length differs from jet dimension");
  int deg = 0;
  std::vector<std::uint8_t> a(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0) throw DimensionMismatch("negative multi-index entry");
    deg += alpha[i];
    a[i] = static_cast<std::uint8_t>(std::min(alpha[i], 255));
  }
  if (deg > order_)
    throw InsufficientOrder("derivative of order " + std::to_string(deg) + " requested from jet of order " +
                            std::to_string(order_));
  return lookup(key(a));
}

// ---------------------------------------------------------------------------

template <class T>
Jet<T> Jet<T>::variable(const JetLayout& layout, int var, T base_value) {
  if (var < 0 || var >= layout.dim()) throw DimensionMismatch("coordinate index out of range");
  Jet j(layout);
  j.c_[0] = std::move(base_value);
  if (layout.order() >= 1) j.c_[layout.unit_index(var)] = T(1);
  return j;
}

template <class T>
Jet<T> Jet<T>::from_coefficients(const JetLayout& layout, std::vector<T> coeffs) {
  if (coeffs.size() != layout.size()) throw DimensionMismatch("coefficient table size differs from jet layout");
  Jet j;
  j.layout_ = &layout;
  j.c_ = std::move(coeffs);
  return j;
}

template <class T>
T Jet<T>::derivative(std::span<const int> alpha) const {
  if (!layout_) {
    for (int a : alpha)
      if (a != 0) return T(0);
    return c_[0];
  }
  const std::size_t idx = layout_->index_of(alpha);
  return c_[idx] * T(static_cast<long>(layout_->alpha_factorial(idx)));
}

template <class T>
Jet<T> Jet<T>::partial(int var) const {
  if (!layout_) return Jet();
  if (var < 0 || var >= layout_->dim()) throw DimensionMismatch("coordinate index out of range");
  if (layout_->order() == 0) throw InsufficientOrder("cannot differentiate an order-0 jet");
  const JetLayout& lower = JetLayout::get(layout_->dim(), layout_->order() - 1);
  Jet out(lower);
  const auto table = layout_->derivative_table(var);
  for (std::size_t t = 0; t < table.size(); ++t) {
    const T& src = c_[table[t].source];
    if (!RingTraits<T>::is_zero(src)) out.c_[t] = src * T(static_cast<long>(table[t].factor));
  }
  return out;
}

template <class T>
Jet<T> Jet<T>::truncated(int order) const {
  if (!layout_ || order >= layout_->order()) return *this;
  if (order < 0) throw InsufficientOrder("negative truncation order");
  const JetLayout& lower = JetLayout::get(layout_->dim(), order);
  Jet out;
  out.layout_ = &lower;
  out.c_.assign(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lower.size()));
  return out;
}

template <class T>
Jet<T> Jet<T>::lifted(const JetLayout& layout) const {
  if (layout_) return *this;
  Jet out(layout);
  out.c_[0] = c_[0];
  return out;
}

template <class T>
bool Jet<T>::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const T& v) { return RingTraits<T>::is_zero(v); });
}

template <class T>
double Jet<T>::max_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(RingTraits<T>::to_double(v)));
  return m;
}

template <class T>
const JetLayout* Jet<T>::common_layout(const Jet& a, const Jet& b) {
  if (!a.layout_) return b.layout_;
  if (!b.layout_) return a.layout_;
  if (a.layout_->dim() != b.layout_->dim()) throw DimensionMismatch("jets over different dimensions");
  return a.layout_->order() <= b.layout_->order() ? a.layout_ : b.layout_;
}

template <class T>
Jet<T>& Jet<T>::operator+=(const Jet& o) {
  const JetLayout* l = common_layout(*this, o);
  if (l != layout_) {
    if (!layout_) {
      T c0 = c_[0];
      *this = o.truncated(l->order());
      c_[0] += c0;
      return *this;
    }
    *this = truncated(l->order());
  }
  const std::size_t m = std::min(c_.size(), o.c_.size());
  for (std::size_t i = 0; i < m; ++i)
    if (!RingTraits<T>::is_zero(o.c_[i])) c_[i] += o.c_[i];
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator-=(const Jet& o) {
  const JetLayout* l = common_layout(*this, o);
  if (l != layout_) {
    if (!layout_) {
      T c0 = c_[0];
      *this = -o.truncated(l->order());
      c_[0] += c0;
      return *this;
    }
    *this = truncated(l->order());
  }
  const std::size_t m = std::min(c_.size(), o.c_.size());
  for (std::size_t i = 0; i < m; ++i)
    if (!RingTraits<T>::is_zero(o.c_[i])) c_[i] -= o.c_[i];
  return *this;
}

template <class T>
Jet<T> Jet<T>::operator-() const {
  Jet out = *this;
  for (auto& v : out.c_) v = T(0) - v;
  return out;
}

template <class T>
Jet<T>& Jet<T>::operator*=(const T& s) {
  if (RingTraits<T>::is_zero(s)) {
    for (auto& v : c_) v = T(0);
    return *this;
  }
  for (auto& v : c_)
    if (!RingTraits<T>::is_zero(v)) v *= s;
  return *this;
}

template <class T>
Jet<T> Jet<T>::multiply(const Jet& a, const Jet& b) {
  if (!a.layout_) return b * a.c_[0];
  if (!b.layout_) return a * b.c_[0];
  const JetLayout* l = common_layout(a, b);
  Jet out(*l);
  for (std::size_t r = 0; r < l->size(); ++r) {
    T& acc = out.c_[r];
    for (const auto& t : l->product_terms(r)) {
      const T& x = a.c_[t.lhs];
      if (RingTraits<T>::is_zero(x)) continue;
      const T& y = b.c_[t.rhs];
      if (RingTraits<T>::is_zero(y)) continue;
      RingTraits<T>::add_product(acc, x, y);
    }
  }
  return out;
}

template <class T>
Jet<T>& Jet<T>::operator*=(const Jet& o) {
  *this = multiply(*this, o);
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator/=(const Jet& o) {
  if (RingTraits<T>::is_zero(o.c_[0])) throw EvaluationSingularity("jet division by a divisor vanishing at the base point");
  if (!o.layout_) {
    const T inv = RingTraits<T>::divide(T(1), o.c_[0]);
    return *this *= inv;
  }
  const JetLayout* l = common_layout(*this, o);
  Jet num = layout_ ? truncated(l->order()) : Jet(*l);
  if (!layout_) num.c_[0] = c_[0];
  const T inv0 = RingTraits<T>::divide(T(1), o.c_[0]);
  // q_r = (a_r - sum_{i != 0} b_i q_j) / b_0, filled in graded order so every
  // q_j on the right is already known.
  Jet q(*l);
  for (std::size_t r = 0; r < l->size(); ++r) {
    T acc = num.c_[r];
    for (const auto& t : l->product_terms(r)) {
      if (t.lhs == 0) continue;
      const T& x = o.c_[t.lhs];
      if (RingTraits<T>::is_zero(x)) continue;
      const T& y = q.c_[t.rhs];
      if (RingTraits<T>::is_zero(y)) continue;
      RingTraits<T>::add_product(acc, T(0) - x, y);
    }
    if (!RingTraits<T>::is_zero(acc)) q.c_[r] = acc * inv0;
  }
  *this = std::move(q);
  return *this;
}

template <class T>
Jet<T> Jet<T>::reciprocal() const {
  Jet one(T(1));
  return one /= *this;
}

template <class T>
Jet<T> Jet<T>::pow(unsigned exponent) const {
  Jet result(T(1));
  Jet base = *this;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

template <class T>
Jet<T> Jet<T>::compose(std::span<const T> taylor) const {
  if (taylor.empty()) return Jet();
  if (!layout_) {
    // Only the value survives for a constant argument.
    return Jet(taylor[0]);
  }
  Jet h = *this;
  h.c_[0] = T(0);
  const std::size_t k = std::min<std::size_t>(taylor.size() - 1, static_cast<std::size_t>(layout_->order()));
  Jet acc(taylor[k]);
  for (std::size_t j = k; j-- > 0;) {
    acc = acc * h;
    acc += Jet(taylor[j]);
  }
  if (acc.is_constant()) {
    Jet out(*layout_);
    out.c_[0] = acc.c_[0];
    return out;
  }
  return acc;
}

template <class T>
bool Jet<T>::equals(const Jet& o) const {
  if (order() != o.order()) {
    // A constant equals a jet whose higher coefficients vanish.
    if (layout_ && o.layout_) return false;
    const Jet& var = layout_ ? *this : o;
    const Jet& cst = layout_ ? o : *this;
    if (var.c_[0] != cst.c_[0]) return false;
    return std::all_of(var.c_.begin() + 1, var.c_.end(), [](const T& v) { return RingTraits<T>::is_zero(v); });
  }
  return c_ == o.c_;
}

template class Jet<Rational>;
template class Jet<double>;

// ---------------------------------------------------------------------------

namespace {

int usable_order(const FloatJet& x) { return x.is_constant() ? 0 : x.order(); }

}  // namespace

FloatJet sin(const FloatJet& x) {
  const int k = usable_order(x);
  const double s = std::sin(x.value()), c = std::cos(x.value());
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  const double cycle[4] = {s, c, -s, -c};
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    t[static_cast<std::size_t>(j)] = cycle[j % 4] / fact;
  }
  return x.compose(t);
}

FloatJet cos(const FloatJet& x) {
  const int k = usable_order(x);
  const double s = std::sin(x.value()), c = std::cos(x.value());
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  const double cycle[4] = {c, -s, -c, s};
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    t[static_cast<std::size_t>(j)] = cycle[j % 4] / fact;
  }
  return x.compose(t);
}

FloatJet exp(const FloatJet& x) {
  const int k = usable_order(x);
  const double e = std::exp(x.value());
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    t[static_cast<std::size_t>(j)] = e / fact;
  }
  return x.compose(t);
}

FloatJet log(const FloatJet& x) {
  const double a = x.value();
  if (!(a > 0.0)) throw EvaluationSingularity("log of a non-positive value");
  const int k = usable_order(x);
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  t[0] = std::log(a);
  // d^j/dx^j log x = (-1)^{j-1} (j-1)! / x^j, divided by j!.
  for (int j = 1; j <= k; ++j) t[static_cast<std::size_t>(j)] = ((j % 2) ? 1.0 : -1.0) / (j * std::pow(a, j));
  return x.compose(t);
}

FloatJet sqrt(const FloatJet& x) {
  const double a = x.value();
  if (!(a > 0.0)) throw EvaluationSingularity("sqrt at a non-positive value");
  const int k = usable_order(x);
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  // Binomial series: (a + h)^{1/2} = sum_j binom(1/2, j) a^{1/2 - j} h^j.
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom *= (0.5 - (j - 1)) / j;
    t[static_cast<std::size_t>(j)] = binom * std::pow(a, 0.5 - j);
  }
  return x.compose(t);
}

}  // namespace tk
