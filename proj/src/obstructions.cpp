#include "tractorkit/obstructions.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tractorkit/linalg.hpp"

namespace tk {

namespace {

template <class T>
T ring(const Rational& r) {
  return RingTraits<T>::from_rational(r);
}

template <class T>
void check_curvature_type(const Tensor<T>& K) {
  const int n = K.dim();
  if (K.rank() != 4 || K.slot(0) != Slot{Variance::Down, n} || K.slot(1) != Slot{Variance::Down, n} ||
      K.slot(2).variance != Variance::Up || K.slot(3).variance != Variance::Down || K.slot(2).extent != K.slot(3).extent)
    throw DimensionMismatch("expected a curvature-type tensor K_{ab}^C_D");
}

template <class T>
void check_degree(const Tensor<T>& K, int k) {
  if (k < 1 || 2 * k > K.dim()) throw DimensionMismatch("curvature form degree 2k must lie in [2, n]");
}

template <class T>
JetMatrix<T> pair_matrix(const Tensor<T>& K, int a, int b) {
  const int m = K.slot(2).extent;
  JetMatrix<T> M(m, m);
  for (int c = 0; c < m; ++c)
    for (int d = 0; d < m; ++d) M(c, d) = K(a, b, c, d);
  return M;
}

// tr(M_k ... M_1) for the chain whose first factor acts first.
template <class T>
Jet<T> chain_trace(const std::vector<const JetMatrix<T>*>& ms) {
  const int m = ms.front()->rows();
  if (ms.size() == 1) {
    Jet<T> t;
    for (int c = 0; c < m; ++c) t += (*ms[0])(c, c);
    return t;
  }
  JetMatrix<T> acc = *ms[0];
  for (std::size_t i = 1; i + 1 < ms.size(); ++i) acc = (*ms[i]) * acc;
  const JetMatrix<T>& last = *ms.back();
  Jet<T> t;
  for (int c = 0; c < m; ++c)
    for (int e = 0; e < m; ++e)
      if (!last(c, e).is_zero() && !acc(e, c).is_zero()) t += last(c, e) * acc(e, c);
  return t;
}

// Writes value into every permutation of the increasing tuple s with sign.
template <class T>
void fill_alternating(Tensor<T>& out, const std::vector<int>& s, const Jet<T>& value) {
  std::vector<int> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> idx(s.size());
  const Jet<T> neg = -value;
  do {
    for (std::size_t i = 0; i < s.size(); ++i) idx[i] = s[static_cast<std::size_t>(perm[i])];
    out.at(idx) = permutation_sign(perm) > 0 ? value : neg;
  } while (std::next_permutation(perm.begin(), perm.end()));
}

template <class F>
void for_each_combination(int n, int r, F&& f) {
  std::vector<int> s(static_cast<std::size_t>(r));
  std::iota(s.begin(), s.end(), 0);
  if (r > n) return;
  while (true) {
    f(s);
    int i = r - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++s[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Ordered sequences of k pairs covering positions 0..2k-1, each pair
// increasing and the pair holding position 0 first. Each entry lists the
// positions in sequence order together with the permutation sign.
struct PairSequence {
  std::vector<int> positions;
  int sign;
};

std::vector<PairSequence> pair_sequences(int k) {
  std::vector<PairSequence> out;
  std::vector<int> seq;
  std::vector<bool> used(static_cast<std::size_t>(2 * k), false);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(seq.size()) == 2 * k) {
      out.push_back({seq, permutation_sign(seq)});
      return;
    }
    for (int a = 0; a < 2 * k; ++a) {
      if (used[static_cast<std::size_t>(a)]) continue;
      if (seq.empty() && a != 0) break;
      for (int b = a + 1; b < 2 * k; ++b) {
        if (used[static_cast<std::size_t>(b)]) continue;
        used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = true;
        seq.push_back(a);
        seq.push_back(b);
        self(self);
        seq.pop_back();
        seq.pop_back();
        used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = false;
      }
      if (seq.empty()) break;
    }
  };
  rec(rec);
  return out;
}

}  // namespace

template <class T>
Tensor<T> p_form(const Tensor<T>& K, int k) {
  check_curvature_type(K);
  check_degree(K, k);
  const int n = K.dim();
  Tensor<T> out = Tensor<T>::of(n, std::string(static_cast<std::size_t>(2 * k), 'd'));
  out.set_point(K.point());

  std::vector<JetMatrix<T>> mats(static_cast<std::size_t>(n * n));
  std::vector<bool> zero(static_cast<std::size_t>(n * n), true);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      mats[static_cast<std::size_t>(a * n + b)] = pair_matrix(K, a, b);
      zero[static_cast<std::size_t>(a * n + b)] = mats[static_cast<std::size_t>(a * n + b)].is_zero();
    }

  // Swapping inside a pair and rotating the pairs cyclically leave each term
  // unchanged, so the (2k)! terms collapse onto the pair sequences times 2^k k.
  const std::vector<PairSequence> seqs = pair_sequences(k);
  const T weight = ring<T>(pow(Rational(2), static_cast<unsigned>(k)) * Rational(k) / factorial(static_cast<unsigned>(2 * k)));
  std::vector<const JetMatrix<T>*> chain(static_cast<std::size_t>(k));
  for_each_combination(n, 2 * k, [&](const std::vector<int>& s) {
    Jet<T> sum;
    for (const PairSequence& ps : seqs) {
      bool skip = false;
      for (int i = 0; i < k && !skip; ++i) {
        const int a = s[static_cast<std::size_t>(ps.positions[static_cast<std::size_t>(2 * i)])];
        const int b = s[static_cast<std::size_t>(ps.positions[static_cast<std::size_t>(2 * i + 1)])];
        if (zero[static_cast<std::size_t>(a * n + b)]) skip = true;
        chain[static_cast<std::size_t>(i)] = &mats[static_cast<std::size_t>(a * n + b)];
      }
      if (skip) continue;
      const Jet<T> t = chain_trace(chain);
      if (ps.sign > 0)
        sum += t;
      else
        sum -= t;
    }
    if (sum.is_zero()) return;
    fill_alternating(out, s, sum * weight);
  });
  return out;
}

template <class T>
Tensor<T> p_form_bruteforce(const Tensor<T>& K, int k) {
  check_curvature_type(K);
  check_degree(K, k);
  const int n = K.dim();
  if (n > 4 || k > 2) throw PreconditionViolation("brute-force curvature forms are limited to n <= 4, k <= 2");
  const int m = K.slot(2).extent;
  Tensor<T> out = Tensor<T>::of(n, std::string(static_cast<std::size_t>(2 * k), 'd'));
  out.set_point(K.point());
  const T weight = ring<T>(Rational(1) / factorial(static_cast<unsigned>(2 * k)));
  const std::vector<int> extents(static_cast<std::size_t>(2 * k), n);
  std::vector<int> perm(static_cast<std::size_t>(2 * k));
  std::vector<int> a(static_cast<std::size_t>(2 * k));
  for_each_index(std::span<const int>(extents), [&](std::span<const int> idx) {
    std::iota(perm.begin(), perm.end(), 0);
    Jet<T> sum;
    do {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = idx[static_cast<std::size_t>(perm[i])];
      // sum over c_1..c_k of K_{a1a2}^{c1}_{ck} K_{a3a4}^{c2}_{c1} ...
      const std::vector<int> cext(static_cast<std::size_t>(k), m);
      Jet<T> term;
      for_each_index(std::span<const int>(cext), [&](std::span<const int> c) {
        Jet<T> prod = K(a[0], a[1], c[0], c[static_cast<std::size_t>(k - 1)]);
        for (int i = 1; i < k && !prod.is_zero(); ++i)
          prod = prod * K(a[static_cast<std::size_t>(2 * i)], a[static_cast<std::size_t>(2 * i + 1)], c[static_cast<std::size_t>(i)],
                          c[static_cast<std::size_t>(i - 1)]);
        term += prod;
      });
      if (permutation_sign(perm) > 0)
        sum += term;
      else
        sum -= term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.at(idx) = sum * weight;
  });
  return out;
}

template <class T>
Tensor<T> p_form(const ProjectiveCurvature<T>& pc, int k, ChernInput input, double tol) {
  if (input == ChernInput::Weyl) return p_form(pc.W, k);
  if (!vanishes(pc.beta, tol))
    throw PreconditionViolation("p_k from R needs a scale connection, but beta_ab does not vanish");
  return p_form(pc.R, k);
}

template <class T>
Tensor<T> exterior_derivative(const Tensor<T>& form) {
  const int p = form.rank();
  std::vector<int> slots(static_cast<std::size_t>(p + 1));
  std::iota(slots.begin(), slots.end(), 0);
  return alternate(partial_derivative(form), std::span<const int>(slots)) * ring<T>(Rational(p + 1));
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
double magnitude(const T& v) {
  return std::abs(RingTraits<T>::to_double(v));
}

// Determinant of a small square matrix by elimination.
template <class T>
T small_det(std::vector<std::vector<T>> m) {
  const int r = static_cast<int>(m.size());
  T det = ring<T>(Rational(1));
  for (int c = 0; c < r; ++c) {
    int piv = -1;
    double best = 0.0;
    for (int i = c; i < r; ++i) {
      const auto& v = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (RingTraits<T>::is_zero(v)) continue;
      if constexpr (RingTraits<T>::exact) {
        piv = i;
        break;
      } else if (magnitude(v) > best) {
        best = magnitude(v);
        piv = i;
      }
    }
    if (piv < 0) return T(0);
    if (piv != c) {
      std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(c)]);
      det = -det;
    }
    const T pv = m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    det *= pv;
    for (int i = c + 1; i < r; ++i) {
      T f = RingTraits<T>::divide(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)], pv);
      if (RingTraits<T>::is_zero(f)) continue;
      for (int j = c; j < r; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
    }
  }
  return det;
}

// Reduced row echelon form over Q; returns the pivot columns.
std::vector<int> rref(std::vector<std::vector<Rational>>& m) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(r)]);
    auto& row = m[static_cast<std::size_t>(r)];
    const Rational inv = row[static_cast<std::size_t>(c)].reciprocal();
    for (auto& v : row) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto& other = m[static_cast<std::size_t>(i)];
      const Rational f = other[static_cast<std::size_t>(c)];
      if (f.is_zero()) continue;
      for (int j = c; j < cols; ++j) other[static_cast<std::size_t>(j)] -= f * row[static_cast<std::size_t>(j)];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

long binomial_capped(int n, int r, long cap) {
  if (r < 0 || r > n) return 0;
  long b = 1;
  for (int i = 1; i <= r; ++i) {
    b = b * (n - r + i) / i;
    if (b > cap) return cap + 1;
  }
  return b;
}

}  // namespace

template <class T>
WedgeObstruction<T> wedge_obstruction(const std::vector<std::vector<T>>& a, double tol) {
  WedgeObstruction<T> w;
  w.rank_e = static_cast<int>(a.size());
  w.rank_f = w.rank_e ? static_cast<int>(a[0].size()) : 0;
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != w.rank_f) throw DimensionMismatch("ragged matrix");
  if (w.rank_e == 0) throw DimensionMismatch("empty source bundle");
  if (w.rank_e > w.rank_f) throw DimensionMismatch("top exterior power vanishes: rank E exceeds rank F");
  const int re = w.rank_e, rf = w.rank_f;

  if (binomial_capped(rf, re, kMaxMinors) <= kMaxMinors) {
    w.all_minors = true;
    for_each_combination(rf, re, [&](const std::vector<int>& cols) {
      std::vector<std::vector<T>> sub(static_cast<std::size_t>(re), std::vector<T>(static_cast<std::size_t>(re)));
      for (int i = 0; i < re; ++i)
        for (int j = 0; j < re; ++j)
          sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              a[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])];
      w.minors.push_back(small_det(std::move(sub)));
    });
  }

  if constexpr (RingTraits<T>::exact) {
    std::vector<std::vector<Rational>> m = a;
    const std::vector<int> piv = rref(m);
    w.rank = static_cast<int>(piv.size());
    w.vanishes = w.rank < re;
    if (!w.vanishes) {
      w.witness_columns = piv;
      std::vector<std::vector<T>> sub(static_cast<std::size_t>(re), std::vector<T>(static_cast<std::size_t>(re)));
      for (int i = 0; i < re; ++i)
        for (int j = 0; j < re; ++j)
          sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              a[static_cast<std::size_t>(i)][static_cast<std::size_t>(piv[static_cast<std::size_t>(j)])];
      w.witness_minor = small_det(std::move(sub));
    } else {
      // Left kernel: null space of A^T from its reduced echelon form.
      std::vector<std::vector<Rational>> t(static_cast<std::size_t>(rf), std::vector<Rational>(static_cast<std::size_t>(re)));
      for (int i = 0; i < re; ++i)
        for (int j = 0; j < rf; ++j) t[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const std::vector<int> tp = rref(t);
      int free_col = 0;
      while (std::find(tp.begin(), tp.end(), free_col) != tp.end()) ++free_col;
      w.kernel.assign(static_cast<std::size_t>(re), Rational(0));
      w.kernel[static_cast<std::size_t>(free_col)] = Rational(1);
      for (std::size_t r = 0; r < tp.size(); ++r)
        w.kernel[static_cast<std::size_t>(tp[r])] = -t[r][static_cast<std::size_t>(free_col)];
    }
    w.margin = w.vanishes ? 0.0 : 1.0;
  } else {
    Eigen::MatrixXd m(rf, re);
    for (int i = 0; i < re; ++i)
      for (int j = 0; j < rf; ++j) m(j, i) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    w.rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * smax && sv(i) > 0.0) ++w.rank;
    w.vanishes = w.rank < re;
    w.margin = smax > 0.0 ? sv(sv.size() - 1) / smax : 0.0;
    if (w.vanishes) {
      const Eigen::MatrixXd& V = svd.matrixV();
      for (int i = 0; i < re; ++i) w.kernel.push_back(V(i, re - 1));
    }
  }
  return w;
}

template <class T>
std::vector<std::vector<T>> metric_symmetry_map(const Tensor<T>& W) {
  check_curvature_type(W);
  const int n = W.dim();
  std::vector<std::pair<int, int>> sym, skew;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) sym.emplace_back(p, q);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) skew.emplace_back(a, b);
  const T half = ring<T>(Rational(1, 2));
  std::vector<std::vector<T>> out;
  for (const auto& [p, q] : sym) {
    // g = e_p (x) e_q + e_q (x) e_p, halved on the diagonal
    auto g = [&](int x, int y) -> T {
      if ((x == p && y == q) || (x == q && y == p)) return ring<T>(Rational(1));
      return T(0);
    };
    std::vector<T> row;
    for (const auto& [a, b] : skew)
      for (const auto& [d, e] : sym) {
        T v(0);
        for (int c = 0; c < n; ++c) {
          const T ge = g(e, c), gd = g(d, c);
          if (!RingTraits<T>::is_zero(ge)) v += W(a, b, c, d).value() * ge;
          if (!RingTraits<T>::is_zero(gd)) v += W(a, b, c, e).value() * gd;
        }
        row.push_back(v * half);
      }
    out.push_back(std::move(row));
  }
  return out;
}

#define TK_INSTANTIATE_OBSTRUCTIONS(T)                                                            \
  template Tensor<T> p_form(const Tensor<T>&, int);                                               \
  template Tensor<T> p_form_bruteforce(const Tensor<T>&, int);                                    \
  template Tensor<T> p_form(const ProjectiveCurvature<T>&, int, ChernInput, double);              \
  template Tensor<T> exterior_derivative(const Tensor<T>&);                                       \
  template WedgeObstruction<T> wedge_obstruction(const std::vector<std::vector<T>>&, double);     \
  template std::vector<std::vector<T>> metric_symmetry_map(const Tensor<T>&);

TK_INSTANTIATE_OBSTRUCTIONS(Rational)
TK_INSTANTIATE_OBSTRUCTIONS(double)

#undef TK_INSTANTIATE_OBSTRUCTIONS

}  // namespace tk
