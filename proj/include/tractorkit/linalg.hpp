#pragma once

#include <vector>

#include "tractorkit/tensor.hpp"

namespace tk {

/// Dense matrix of jets with a density weight tag. Square instances play the
/// role of endomorphism densities; rectangular ones are flattened tensors.
template <class T>
class JetMatrix {
 public:
  using JetT = Jet<T>;

  JetMatrix() = default;
  JetMatrix(int rows, int cols, int weight = 0)
      : rows_(rows), cols_(cols), weight_(weight), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  static JetMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int weight() const { return weight_; }
  void set_weight(int w) { weight_ = w; }

  JetT& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)]; }
  const JetT& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)];
  }

  JetMatrix transpose() const;
  bool is_zero() const;
  friend bool operator==(const JetMatrix& x, const JetMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  int weight_ = 0;
  std::vector<JetT> a_;
};

template <class T>
JetMatrix<T> operator*(const JetMatrix<T>& x, const JetMatrix<T>& y);

template <class T>
struct DetAdj {
  Jet<T> det;
  int det_weight = 0;
  JetMatrix<T> adj;
};

/// Determinant and adjugate without division, so they stay valid as jets
/// and when the determinant vanishes. M * adj(M) = det(M) * Id exactly.
template <class T>
DetAdj<T> det_adj(const JetMatrix<T>& m);
template <class T>
Jet<T> determinant(const JetMatrix<T>& m);

/// Rank of an exact matrix of values (Gaussian elimination over Q).
int exact_rank(const std::vector<std::vector<Rational>>& rows);

/// Singular values of a float matrix, largest first.
std::vector<double> singular_values(const std::vector<std::vector<double>>& rows);

/// The n^3 x n flattening A[(i,j,k)][l] = W_{ij}^l_k of a Weyl-type tensor
/// (slots Down Down Up Down), at the base point.
template <class T>
std::vector<std::vector<T>> weyl_flattening_values(const Tensor<T>& w);

/// Left inverse D^{ij}_m^k of a Weyl-type tensor viewed as a map
/// T*M -> L2T*M (x) T*M, from the normal equations (A^T A)^{-1} A^T in jet
/// arithmetic. D_{(ijk)} W_{ij}^l_k = delta_m^l to the jet order of W.
/// Throws GenericityFailure when the map has a kernel at the base point
/// (exact ring) or its smallest relative singular value is below tol (float).
template <class T>
Tensor<T> left_inverse_flat(const Tensor<T>& w, double tol = 1e-8);

extern template class JetMatrix<Rational>;
extern template class JetMatrix<double>;

}  // namespace tk
