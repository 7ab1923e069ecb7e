#pragma once

#include <vector>

#include "tractorkit/curvature.hpp"

namespace tk {

/// k-th curvature form of a curvature-type tensor K_{ab}^C_D (slots Down n,
/// Down n, Up m, Down m; m = n for R or W, m = n + 1 for the tractor
/// curvature): the 1/(2k)!-weighted alternation over a_1..a_2k of
/// K_{a1a2}^{C1}_{Ck} K_{a3a4}^{C2}_{C1} ... K_{a(2k-1)a(2k)}^{Ck}_{C(k-1)}.
/// Throws DimensionMismatch when 2k > n.
template <class T>
Tensor<T> p_form(const Tensor<T>& curvature, int k);

/// The tractor forms q_k: the same chain traced over tractor indices.
template <class T>
Tensor<T> q_form(const Tensor<T>& omega, int k) {
  return p_form(omega, k);
}

/// Direct sum over all (2k)! permutations for every component. Limited to
/// n <= 4 and k <= 2; throws PreconditionViolation beyond that.
template <class T>
Tensor<T> p_form_bruteforce(const Tensor<T>& curvature, int k);

enum class ChernInput { Curvature, Weyl };

/// p_k from R or from W. The R path needs a scale connection and throws
/// PreconditionViolation when beta does not vanish.
template <class T>
Tensor<T> p_form(const ProjectiveCurvature<T>& pc, int k, ChernInput input, double tol = 0.0);

/// (d alpha)_{a0..ap} = sum_i (-1)^i d_{a_i} alpha_{a0..^a_i..ap} for an
/// alternating p-form; the new slot comes first.
template <class T>
Tensor<T> exterior_derivative(const Tensor<T>& form);

/// Result of the top-exterior-power test for A : E* -> F given as a
/// rank_e x rank_f matrix of values.
template <class T>
struct WedgeObstruction {
  int rank_e = 0;
  int rank_f = 0;
  int rank = 0;
  bool vanishes = false;
  /// Every maximal minor in lexicographic column order, when there are at
  /// most kMaxMinors of them; otherwise empty and all_minors is false.
  std::vector<T> minors;
  bool all_minors = false;
  /// Columns of one nonzero maximal minor (exact ring, when rank = rank_e).
  std::vector<int> witness_columns;
  T witness_minor{};
  /// A nonzero v with v^T A = 0 (when the obstruction vanishes).
  std::vector<T> kernel;
  /// Smallest singular value over the largest (float ring only).
  double margin = 0.0;
};

inline constexpr long kMaxMinors = 20000;

/// Throws DimensionMismatch when rank_e > rank_f.
template <class T>
WedgeObstruction<T> wedge_obstruction(const std::vector<std::vector<T>>& a, double tol = 1e-8);

/// The map S^2 T*M -> L2T*M (x) S^2T*M, g -> W_{ab}^c_(d g_e)c, as a matrix
/// with one row per basis element of S^2 (pairs p <= q) and one column per
/// (a < b, d <= e), at the base point.
template <class T>
std::vector<std::vector<T>> metric_symmetry_map(const Tensor<T>& W);

}  // namespace tk
