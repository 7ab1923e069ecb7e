#include "tractorkit/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cstdint>

namespace tk {

template <class T>
JetMatrix<T> JetMatrix<T>::identity(int n) {
  JetMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = JetT(T(1));
  return m;
}

template <class T>
JetMatrix<T> JetMatrix<T>::transpose() const {
  JetMatrix t(cols_, rows_, weight_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

template <class T>
bool JetMatrix<T>::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const JetT& j) { return j.is_zero(); });
}

template class JetMatrix<Rational>;
template class JetMatrix<double>;

template <class T>
JetMatrix<T> operator*(const JetMatrix<T>& x, const JetMatrix<T>& y) {
  if (x.cols() != y.rows()) throw DimensionMismatch("matrix product with incompatible shapes");
  JetMatrix<T> out(x.rows(), y.cols(), x.weight() + y.weight());
  for (int r = 0; r < x.rows(); ++r)
    for (int k = 0; k < x.cols(); ++k) {
      const Jet<T>& a = x(r, k);
      if (a.is_zero()) continue;
      for (int c = 0; c < y.cols(); ++c)
        if (!y(k, c).is_zero()) out(r, c) += a * y(k, c);
    }
  return out;
}

namespace {

// Laplace expansion along successive rows, memoised over the set of columns
// still available: minor[S] is the determinant of rows 0..|S|-1 restricted to
// the columns in S.
template <class T>
Jet<T> subset_determinant(const JetMatrix<T>& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return Jet<T>(T(1));
  const std::uint32_t full = (1u << k) - 1u;
  std::vector<Jet<T>> minor(static_cast<std::size_t>(full) + 1);
  minor[0] = Jet<T>(T(1));
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int r = std::popcount(s) - 1;
    Jet<T> acc;
    int above = 0;  // set bits of s above the current column
    for (int j = k - 1; j >= 0; --j) {
      if (!(s & (1u << j))) continue;
      const Jet<T>& a = m(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(j)]);
      const Jet<T>& sub = minor[s & ~(1u << j)];
      if (!a.is_zero() && !sub.is_zero()) {
        if (above % 2 == 0)
          acc += a * sub;
        else
          acc -= a * sub;
      }
      ++above;
    }
    minor[s] = std::move(acc);
  }
  return minor[full];
}

}  // namespace

template <class T>
Jet<T> determinant(const JetMatrix<T>& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  if (m.rows() > 20) throw DimensionMismatch("determinant size beyond supported range");
  std::vector<int> idx(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return subset_determinant(m, idx, idx);
}

template <class T>
DetAdj<T> det_adj(const JetMatrix<T>& m) {
  const int n = m.rows();
  if (n != m.cols()) throw DimensionMismatch("adjugate of a non-square matrix");
  DetAdj<T> out{determinant(m), n * m.weight(), JetMatrix<T>(n, n, (n - 1) * m.weight())};
  if (n == 1) {
    out.adj(0, 0) = Jet<T>(T(1));
    return out;
  }
  std::vector<int> rows, cols;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rows.clear();
      cols.clear();
      for (int r = 0; r < n; ++r)
        if (r != i) rows.push_back(r);
      for (int c = 0; c < n; ++c)
        if (c != j) cols.push_back(c);
      Jet<T> cof = subset_determinant(m, rows, cols);
      if ((i + j) % 2) cof = -cof;
      out.adj(j, i) = std::move(cof);
    }
  return out;
}

int exact_rank(const std::vector<std::vector<Rational>>& input) {
  auto a = input;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const Rational inv = a[rank][c].reciprocal();
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c].is_zero()) continue;
      const Rational f = a[r][c] * inv;
      for (std::size_t k = c; k < cols; ++k)
        if (!a[rank][k].is_zero()) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

std::vector<double> singular_values(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

namespace {

template <class T>
void check_weyl_type(const Tensor<T>& w) {
  const int n = w.dim();
  const std::vector<Slot> expect{{Variance::Down, n}, {Variance::Down, n}, {Variance::Up, n}, {Variance::Down, n}};
  if (w.slots() != expect) throw DimensionMismatch("expected a Weyl-type tensor W_{ab}^c_d");
}

}  // namespace

template <class T>
std::vector<std::vector<T>> weyl_flattening_values(const Tensor<T>& w) {
  check_weyl_type(w);
  const int n = w.dim();
  std::vector<std::vector<T>> a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::vector<T> row;
        for (int l = 0; l < n; ++l) row.push_back(w(i, j, l, k).value());
        a.push_back(std::move(row));
      }
  return a;
}

template <class T>
Tensor<T> left_inverse_flat(const Tensor<T>& w, double tol) {
  check_weyl_type(w);
  const int n = w.dim();

  if constexpr (!RingTraits<T>::exact) {
    const auto sv = singular_values(weyl_flattening_values(w));
    const double smax = sv.empty() ? 0.0 : sv.front();
    const double smin = sv.empty() ? 0.0 : sv.back();
    if (smax == 0.0 || smin < tol * smax)
      throw GenericityFailure("Weyl map is numerically singular (relative smallest singular value " +
                              std::to_string(smax == 0.0 ? 0.0 : smin / smax) + ")");
  }

  // AtA[l][m] = sum_{ijk} W_{ij}^l_k W_{ij}^m_k, symmetric.
  JetMatrix<T> ata(n, n);
  for (int l = 0; l < n; ++l)
    for (int m = l; m < n; ++m) {
      Jet<T> acc;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          for (int k = 0; k < n; ++k) {
            const Jet<T>& x = w(i, j, l, k);
            if (x.is_zero()) continue;
            const Jet<T>& y = w(i, j, m, k);
            if (!y.is_zero()) acc += x * y;
          }
        }
      ata(l, m) = acc;
      if (m != l) ata(m, l) = std::move(acc);
    }
  DetAdj<T> da = det_adj(ata);
  if (RingTraits<T>::is_zero(da.det.value())) throw GenericityFailure("Weyl map has a kernel at the base point");
  const Jet<T> inv_det = da.det.reciprocal();

  Tensor<T> d(n, {{Variance::Up, n}, {Variance::Up, n}, {Variance::Down, n}, {Variance::Up, n}}, -w.weight());
  d.set_point(w.point());
  for (int m = 0; m < n; ++m) {
    std::vector<Jet<T>> row(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) row[static_cast<std::size_t>(l)] = da.adj(m, l) * inv_det;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Jet<T> acc;
          for (int l = 0; l < n; ++l) {
            const Jet<T>& x = w(i, j, l, k);
            if (!x.is_zero()) acc += row[static_cast<std::size_t>(l)] * x;
          }
          d(i, j, m, k) = std::move(acc);
        }
  }
  return d;
}

#define TK_INSTANTIATE_LINALG(T)                                                     \
  template JetMatrix<T> operator*(const JetMatrix<T>&, const JetMatrix<T>&);        \
  template DetAdj<T> det_adj(const JetMatrix<T>&);                                  \
  template Jet<T> determinant(const JetMatrix<T>&);                                 \
  template std::vector<std::vector<T>> weyl_flattening_values(const Tensor<T>&);    \
  template Tensor<T> left_inverse_flat(const Tensor<T>&, double);

TK_INSTANTIATE_LINALG(Rational)
TK_INSTANTIATE_LINALG(double)

#undef TK_INSTANTIATE_LINALG

}  // namespace tk
