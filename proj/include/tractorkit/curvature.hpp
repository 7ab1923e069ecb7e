#pragma once

#include "tractorkit/connection.hpp"

namespace tk {

/// Curvature of a connection and its projective pieces at a point.
///
/// Slot conventions: R, W are R_{ab}^c_d (Down, Down, Up, Down); P, beta, Ric
/// are (Down, Down). R = W + 2 delta^c_[a P_b]d + beta_ab delta^c_d.
template <class T>
struct ProjectiveCurvature {
  Tensor<T> R;
  Tensor<T> W;
  Tensor<T> P;
  Tensor<T> beta;
  Tensor<T> Ric;
};

/// R_{ab}^c_d = d_a Gamma^c_{bd} - d_b Gamma^c_{ad} + Gamma^c_{ae} Gamma^e_{bd}
///            - Gamma^c_{be} Gamma^e_{ad},
/// so that (nabla_a nabla_b - nabla_b nabla_a) v^c = R_{ab}^c_d v^d. One jet
/// order is lost.
template <class T>
Tensor<T> riemann(const Tensor<T>& gamma);

/// Ric_{bd} = R_{cb}^c_d, beta = R_{ab}^c_c / (n + 1),
/// P = (Ric + beta) / (n - 1), W the remainder. Needs n >= 2; in n = 2 the
/// Weyl part vanishes identically.
template <class T>
ProjectiveCurvature<T> decompose(const Tensor<T>& R);

template <class T>
ProjectiveCurvature<T> projective_curvature(const Tensor<T>& gamma) {
  return decompose(riemann(gamma));
}

/// Reassembles W + 2 delta P + beta delta.
template <class T>
Tensor<T> reassemble(const ProjectiveCurvature<T>& pc);

/// Covariant derivative of a tensor with tangent slots; the new Down slot
/// comes first. A weight-w tensor picks up (w / (n + 1)) theta_a T.
template <class T>
Tensor<T> covariant_derivative(const Tensor<T>& t, const ConnectionJet<T>& c);
/// Same, for weight-0 tensors, from Gamma alone.
template <class T>
Tensor<T> covariant_derivative(const Tensor<T>& t, const Tensor<T>& gamma);

/// C_{dab} = nabla_a P_{bd} - nabla_b P_{ad}, slots (d, a, b).
template <class T>
Tensor<T> cotton(const Tensor<T>& P, const Tensor<T>& gamma);
template <class T>
Tensor<T> cotton(const Tensor<T>& gamma) {
  return cotton(projective_curvature(gamma).P, gamma);
}

/// nabla_c W_{ab}^c_d with slots (a, b, d); equals (n - 2) C_{dab} once
/// permuted to (d, a, b).
template <class T>
Tensor<T> weyl_divergence(const Tensor<T>& W, const Tensor<T>& gamma);

/// P - nabla Upsilon + Upsilon (x) Upsilon and beta + d_a Upsilon_b - d_b Upsilon_a,
/// the predicted Schouten tensor and beta of the shifted connection.
template <class T>
std::pair<Tensor<T>, Tensor<T>> schouten_transform(const Tensor<T>& P, const Tensor<T>& beta, const Tensor<T>& upsilon,
                                                   const Tensor<T>& gamma);

/// C' - C - W_{ij}^l_k Upsilon_l with C' recomputed from the shifted
/// connection; slots (k, i, j). Zero when the transformation law holds.
template <class T>
Tensor<T> cotton_transform_residual(const Tensor<T>& gamma, const Tensor<T>& upsilon);

/// Curvature of the induced connection on the density line:
/// F_ab = (d_a theta_b - d_b theta_a) / (n + 1).
template <class T>
struct ScaleReport {
  Tensor<T> F;
  bool is_scale = false;
};

template <class T>
ScaleReport<T> scale_report(const ConnectionJet<T>& c, double tol = 0.0);

/// True when every component vanishes exactly (Rational) or is at most tol
/// (double).
template <class T>
bool vanishes(const Tensor<T>& t, double tol = 0.0) {
  if constexpr (RingTraits<T>::exact) {
    (void)tol;
    return t.is_zero();
  } else {
    return t.max_abs() <= tol;
  }
}

}  // namespace tk
