#pragma once

#include "tractorkit/tractor.hpp"

namespace tk {

// All densities are trivialized by the metric's own volume, so conformal and
// projective weights are dropped throughout this header.

/// A metric jet with its inverse and Levi-Civita connection.
template <class T>
struct MetricGeometry {
  Tensor<T> g;      // g_ab
  Tensor<T> ginv;   // g^ab
  Tensor<T> gamma;  // one order below g

  int dim() const { return g.dim(); }
  /// The connection jet with theta = 0 (metric volume) and the metric attached.
  ConnectionJet<T> connection() const;
};

template <class T>
MetricGeometry<T> metric_geometry(const Tensor<T>& g);

/// R_abcd = W_abcd + 2 g_c[a P_b]d + 2 g_d[b P_a]c and Ric = (n - 2) P + J g.
template <class T>
struct ConformalCurvature {
  Tensor<T> R_low;  // R_abcd = g_ce R_ab^e_d
  Tensor<T> Ric;    // R_ab^a_d
  Tensor<T> W_low;  // conformal Weyl, all lower
  Tensor<T> W;      // W_ab^c_d
  Tensor<T> P;      // conformal Schouten
  Jet<T> J;         // g^ab P_ab
};

/// Throws DimensionMismatch for n < 3.
template <class T>
ConformalCurvature<T> conformal_decompose(const MetricGeometry<T>& m);

/// R_abcd - W_abcd - 2 g_c[a P_b]d - 2 g_d[b P_a]c.
template <class T>
Tensor<T> conformal_reassembly_residual(const ConformalCurvature<T>& cc, const Tensor<T>& g);
/// Ric - (n - 2) P - J g.
template <class T>
Tensor<T> conformal_ricci_residual(const ConformalCurvature<T>& cc, const Tensor<T>& g);

/// lambda with P = lambda g for the projective Schouten tensor of the
/// Levi-Civita connection, when the metric is Einstein (at jet level; within
/// tol relative to |P| on floats).
template <class T>
std::optional<T> einstein_constant(const MetricGeometry<T>& m, double tol = 1e-9);

template <class T>
struct WeylComparison {
  Tensor<T> residual;  // conformal W_ab^c_d minus projective W
  bool einstein = false;
};

/// Computed whether or not the metric is Einstein; the two agree for
/// Einstein metrics.
template <class T>
WeylComparison<T> compare_weyl(const MetricGeometry<T>& m, double tol = 1e-9);

template <class T>
struct SchoutenHalving {
  Tensor<T> residual;         // conformal P - projective P / 2
  Tensor<T> lambda_residual;  // projective P - lambda g
  T lambda{};
  T J{};                      // conformal J, expected n lambda / 2
};

/// Throws PreconditionViolation when the metric is not Einstein.
template <class T>
SchoutenHalving<T> schouten_halving_check(const MetricGeometry<T>& m, double tol = 1e-9);

/// Conformal cotractors V_alpha = (tau | mu_a | sigma) are tensors with one
/// Down slot of extent n + 2: component 0 is tau, 1..n are mu, n + 1 is sigma.
template <class T>
Tensor<T> make_conformal_cotractor(const Tensor<T>& tau, const Tensor<T>& mu, const Tensor<T>& sigma);

/// (nabla_a tau - P_ab g^bc mu_c, nabla_a mu_b + g_ab tau + P_ab sigma,
/// nabla_a sigma - mu_a), slots (Down a, Down beta).
template <class T>
Tensor<T> conformal_tractor_derivative(const Tensor<T>& V, const MetricGeometry<T>& m, const ConformalCurvature<T>& cc);

/// The dual connection on conformal tractors (one Up slot of extent n + 2).
template <class T>
Tensor<T> conformal_tractor_derivative_up(const Tensor<T>& I, const MetricGeometry<T>& m, const ConformalCurvature<T>& cc);

/// g^ab mu_a mu'_b + sigma tau' + tau sigma'.
template <class T>
Jet<T> conformal_tractor_metric(const Tensor<T>& V, const Tensor<T>& Vp, const Tensor<T>& ginv);

/// I^alpha = (1, 0, -J / n).
template <class T>
Tensor<T> parallel_tractor(const ConformalCurvature<T>& cc, int n);

/// iota(mu | sigma) = (J sigma / n | mu | sigma).
template <class T>
Tensor<T> iota(const Tensor<T>& U, const Jet<T>& J);

template <class T>
struct IotaReport {
  Jet<T> annihilation;          // iota(U) . I
  Tensor<T> connection;         // conformal derivative of iota(U) minus iota of the projective derivative
  Jet<T> metric;                // h~(iota U, iota U') - g^ab mu mu' - lambda sigma sigma'
  T lambda{};                   // 2 J / n
};

/// Throws PreconditionViolation for non-Einstein metrics.
template <class T>
IotaReport<T> iota_checks(const MetricGeometry<T>& m, const Tensor<T>& U, const Tensor<T>& Up, double tol = 1e-9);

/// 4 W_ij^k_l W^ij_k^m - |W|^2 delta_l^m, slots (Down l, Up m). Vanishes
/// identically in dimension 4.
template <class T>
Tensor<T> weyl_square_residual(const ConformalCurvature<T>& cc, const MetricGeometry<T>& m);

/// Gamma^c_ab + Upsilon_a delta^c_b + Upsilon_b delta^c_a - g_ab Upsilon^c,
/// the Levi-Civita connection of Omega^2 g with Upsilon = d log Omega.
template <class T>
Tensor<T> conformal_connection_change(const MetricGeometry<T>& m, const Tensor<T>& upsilon);

}  // namespace tk
