#pragma once

#include "tractorkit/curvature.hpp"

namespace tk {

// Tractor sections are tensors whose tractor slots have extent n + 1. In a
// splitting, component b < n of a cotractor U_A is mu_b and component n is
// sigma; for a tractor V^A, b < n is nu^b and n is rho. The tractor bundles
// themselves are unweighted; the weight tag of a tensor counts any extra
// density weight.

/// The splitting operators X^A, Y_A, Z_A^a, Y^A_a in the chart trivialization.
template <class T>
struct TractorSplitting {
  Tensor<T> X;     // (Up n+1)
  Tensor<T> Y;     // (Down n+1)
  Tensor<T> Z;     // (Down n+1, Up n)
  Tensor<T> Yvec;  // (Up n+1, Down n)
};

template <class T>
TractorSplitting<T> tractor_splitting(int n);
/// X^A Y_A = 1, Z_A^a Y^A_b = delta, and the mixed pairings vanish.
template <class T>
bool splitting_is_consistent(const TractorSplitting<T>& s);

template <class T>
Tensor<T> make_cotractor(const Tensor<T>& mu, const Tensor<T>& sigma);
template <class T>
Tensor<T> make_tractor(const Tensor<T>& nu, const Tensor<T>& rho);

/// The connection together with its Schouten tensor and the tractor
/// connection matrix A_a^C_D acting on tractors:
/// nabla_a V^C = d_a V^C + A_a^C_D V^D.
template <class T>
struct TractorConnection {
  ConnectionJet<T> connection;
  Tensor<T> P;
  Tensor<T> A;  // (Down n, Up n+1, Down n+1)

  int dim() const { return connection.dim(); }
};

template <class T>
TractorConnection<T> tractor_connection(const ConnectionJet<T>& c);

/// (nabla_a mu_b + P_ab sigma | nabla_a sigma - mu_a), slots (a, B).
template <class T>
Tensor<T> cotractor_derivative(const Tensor<T>& U, const TractorConnection<T>& tc);
/// (nabla_a nu^b + rho delta^b_a, nabla_a rho - P_ab nu^b), slots (a, B).
template <class T>
Tensor<T> tractor_derivative(const Tensor<T>& V, const TractorConnection<T>& tc);

/// Covariant derivative of any tensor with tangent slots (Gamma), tractor
/// slots (A) and density weight (theta); the new Down slot comes first.
template <class T>
Tensor<T> tractor_covariant_derivative(const Tensor<T>& t, const TractorConnection<T>& tc);

/// Component change under the splitting change by Upsilon: cotractor slots
/// (mu + Upsilon sigma | sigma), tractor slots (nu, rho - Upsilon . nu).
template <class T>
Tensor<T> change_splitting(const Tensor<T>& t, const Tensor<T>& upsilon);

/// Omega_ab^C_D = W_ab^c_d Z_D^d Y^C_c - C_dab Z_D^d X^C, slots
/// (Down a, Down b, Up C, Down D).
template <class T>
Tensor<T> tractor_curvature(const Tensor<T>& W, const Tensor<T>& C);
/// Omega_ab^C_D X^D, expected to vanish identically.
template <class T>
Tensor<T> curvature_on_X(const Tensor<T>& Omega);

/// Symmetric h^{AB} on cotractors: blocks g^{ab} (weight -2), v^a, tau.
template <class T>
Tensor<T> make_submetric(const Tensor<T>& g_up, const Tensor<T>& v, const Tensor<T>& tau);
template <class T>
Tensor<T> submetric_g(const Tensor<T>& h);
template <class T>
Tensor<T> submetric_v(const Tensor<T>& h);
template <class T>
Tensor<T> submetric_tau(const Tensor<T>& h);

/// h = (g^{ab}, 0, lambda) in the splitting of g's Levi-Civita connection,
/// with densities trivialized by g's volume. Checks Ric = (n - 1) lambda g
/// and throws PreconditionViolation otherwise.
template <class T>
Tensor<T> einstein_submetric(const TractorConnection<T>& tc, const T& lambda);

/// The block formula for nabla_a h^{BC} of a diagonal h: nabla g^{bc},
/// tau delta_a^c - g^{bc} P_ab, nabla tau. Throws PreconditionViolation if the
/// v block is nonzero.
template <class T>
Tensor<T> submetric_derivative(const Tensor<T>& h, const TractorConnection<T>& tc);

/// Upsilon_b = g_ba v^a, the unique splitting change making h diagonal.
template <class T>
Tensor<T> diagonalizing_shift(const Tensor<T>& h);

/// Failure of Omega to be skew with respect to h. When h is nondegenerate
/// this is Omega_abCD + Omega_abDC after lowering with h^{-1}; otherwise the
/// raised form Omega_ab^C_D h^DE + Omega_ab^E_D h^DC.
template <class T>
Tensor<T> skew_residual(const Tensor<T>& Omega, const Tensor<T>& h);

}  // namespace tk
