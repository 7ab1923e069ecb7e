#pragma once

#include <string>
#include <vector>

#include "tractorkit/linalg.hpp"

namespace tk {

/// Inputs (N, R, N_0..N_r, F) of the natural Q construction.
///
/// F[j][alpha] in 1..K (K = (2N + R) / n) assigns the index a^j_alpha of the
/// j-th Weyl chain to a skew group; group 1 holds n - R indices and every
/// other group exactly n.
struct NaturalQInput {
  int R = 0;
  std::vector<int> partition;
  std::vector<std::vector<int>> F;

  int N() const;
  int groups(int n) const { return (2 * N() + R) / n; }

  /// Even n = 2m: N = (m), F = 1. Odd n: N = (n) with the first n chain
  /// indices in group 2 and the last n in group 1.
  static NaturalQInput standard(int n);
  /// (N - 1, 2, (N_0 - 1, N_1, ...), F restricted): the last two indices of
  /// chain 0 become the two free upper indices.
  NaturalQInput primed() const;
  std::string describe() const;
};

/// Empty when the inputs are valid in dimension n, else the reason.
std::string natural_q_violation(int n, const NaturalQInput& in);

/// (Q)^{b_1..b_R}_t^s, slots (Up n)^R, Down t, Up s. Each skew group is
/// contracted with the unnormalised coordinate symbol eps^{...} (group 1 as
/// eps^{a_1..a_(n-R) b_1..b_R}), so the weight tag is K (n + 1). Throws
/// PreconditionViolation on invalid inputs.
template <class T>
Tensor<T> natural_Q(const Tensor<T>& W, const NaturalQInput& in);

template <class T>
struct NaturalLeftInverse {
  Tensor<T> Q;       // R = 0
  Tensor<T> Qprime;  // R = 2
  Jet<T> norm;       // det of Q_t^s
  Tensor<T> D;       // ||Q||^-1 adj(Q)_i^r Q'^{b1b2}_r^k, slots (Up, Up, Down, Up)
};

/// D_(Q) from the natural construction. Needs R = 0, N_0 >= 1 and the last
/// two indices of chain 0 in group 1. Throws GenericityFailure when ||Q||
/// vanishes at the base point (relative to |Q|^n below tol on floats).
template <class T>
NaturalLeftInverse<T> natural_left_inverse(const Tensor<T>& W, const NaturalQInput& in, double tol = 1e-8);

}  // namespace tk
