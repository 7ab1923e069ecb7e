#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tractorkit/curvature.hpp"
#include "tractorkit/natural_q.hpp"

namespace tk {

/// How the left inverse D of the Weyl map is chosen.
struct LeftInverseStrategy {
  enum class Kind { PseudoInverse, NaturalQ };

  Kind kind = Kind::PseudoInverse;
  NaturalQInput q;  // used by NaturalQ

  static LeftInverseStrategy pseudo_inverse() { return {}; }
  static LeftInverseStrategy natural(NaturalQInput in) { return {Kind::NaturalQ, std::move(in)}; }
  std::string describe() const;
};

struct GenericityReport {
  bool ok = false;
  int rank = 0;         // rank of the n^3 x n flattening of W
  double margin = 0.0;  // smallest over largest singular value
  std::string reason;
};

/// Exact ring: ok iff the flattening has rank n. Float ring: ok iff the
/// margin is at least tol.
template <class T>
GenericityReport weak_genericity(const Tensor<T>& W, double tol = 1e-8);

/// D^{ab}_m^k with D W = delta. Throws GenericityFailure.
template <class T>
Tensor<T> left_inverse(const Tensor<T>& W, const LeftInverseStrategy& s, double tol = 1e-8);

/// D^{ij}_m^k W_{ij}^l_k - delta_m^l, slots (m, l).
template <class T>
Tensor<T> left_inverse_residual(const Tensor<T>& D, const Tensor<T>& W);

/// X_i = D^{ab}_i^c C_{cab}.
template <class T>
Tensor<T> contract_DC(const Tensor<T>& D, const Tensor<T>& C);

/// Upsilon_i = -D^{ab}_i^c C_{cab}.
template <class T>
Tensor<T> upsilon(const Tensor<T>& D, const Tensor<T>& C) {
  return -contract_DC(D, C);
}

/// G_ij = P_ij + nabla_i X_j + X_i X_j with X = D.C.
template <class T>
Tensor<T> G_tensor(const Tensor<T>& P, const Tensor<T>& gamma, const Tensor<T>& X);

/// E_ijk = nabla_i G_jk + 2 G_jk X_i + G_ji X_k + G_ik X_j.
template <class T>
Tensor<T> E_tensor(const Tensor<T>& G, const Tensor<T>& gamma, const Tensor<T>& X);

/// 2 E_[ij]k read off from E, slots (i, j, k).
template <class T>
Tensor<T> E_skew(const Tensor<T>& E);

/// C_kij - W_ij^l_k X_l, slots (i, j, k): the closed form of 2 E_[ij]k.
template <class T>
Tensor<T> cotton_flat_residual(const Tensor<T>& C, const Tensor<T>& W, const Tensor<T>& X);

/// gamma = det(G) / n!, the full alternation G_[a1|b1| ... G_an]bn against
/// the chart volume; weight tag -2(n + 1).
template <class T>
Jet<T> gamma_density(const Tensor<T>& G);

enum class Classification { EinsteinNonzero, ProjectivelyRicciFlat, NotEinstein, Inconclusive };

const char* classification_name(Classification c);
/// Inverse of classification_name; throws ParseError.
Classification parse_classification(const std::string& s);

/// Everything computed at one sample point.
template <class T>
struct EinsteinPoint {
  Point point;
  GenericityReport genericity;
  bool evaluated = false;  // false when the left inverse failed
  std::string failure;
  double curvature_scale = 0.0;  // max |R| at the point
  Tensor<T> W, C, P, D, X, G, E;
  Tensor<T> upsilon;
  Tensor<T> cotton_flat;  // C_kij - W X, slots (i, j, k), order 0
  Tensor<T> E_skew;       // 2 E_[ij]k from E
  T gamma{};
  double G_norm = 0.0;
  double G_skew_norm = 0.0;
  double E_norm = 0.0;
  double cotton_flat_norm = 0.0;
  /// Signs of the leading principal minors (exact) or of the eigenvalues
  /// (float) of the symmetric part of G, e.g. "++--".
  std::string signature;
};

template <class T>
struct Verdict {
  Classification classification = Classification::Inconclusive;
  /// Short key of the test that decided: genericity, left-inverse, G-zero,
  /// cotton-flat, G-skew, E, gamma, all-pass.
  std::string criterion;
  std::string reason;
  std::string strategy;
  std::vector<EinsteinPoint<T>> points;
};

/// Per-point pipeline on a connection jet of order >= 4.
template <class T>
EinsteinPoint<T> analyze_point(const ConnectionJet<T>& c, const Point& p, const LeftInverseStrategy& s, double tol = 1e-8);

/// Folds per-point results into a classification.
template <class T>
Verdict<T> classify(std::vector<EinsteinPoint<T>> points, const LeftInverseStrategy& s, double tol = 1e-8);

template <class T>
Verdict<T> verdict(const std::function<ConnectionJet<T>(const Point&)>& jets, const std::vector<Point>& points,
                   const LeftInverseStrategy& s, double tol = 1e-8);
template <class T>
Verdict<T> verdict(const ConnectionSource& src, const std::vector<Point>& points, const LeftInverseStrategy& s,
                   double tol = 1e-8);

}  // namespace tk
