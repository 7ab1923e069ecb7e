#include "tractorkit/curvature.hpp"

namespace tk {

namespace {

template <class T>
T ring(long num, long den = 1) {
  return RingTraits<T>::from_rational(Rational(num, den));
}

template <class T>
void check_gamma(const Tensor<T>& gamma) {
  const int n = gamma.dim();
  if (gamma.slots() != std::vector<Slot>{{Variance::Up, n}, {Variance::Down, n}, {Variance::Down, n}})
    throw DimensionMismatch("expected Christoffel symbols Gamma^i_{jk}");
}

}  // namespace

template <class T>
Tensor<T> riemann(const Tensor<T>& gamma) {
  check_gamma(gamma);
  const int n = gamma.dim();
  if (gamma.min_order() < 1) throw InsufficientOrder("curvature needs a Christoffel jet of order >= 1");
  const Tensor<T> dg = partial_derivative(gamma);  // dg(a, c, b, d) = d_a Gamma^c_{bd}
  Tensor<T> R = Tensor<T>::of(n, "ddud");
  R.set_point(gamma.point());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet<T> v = dg(a, c, b, d) - dg(b, c, a, d);
          for (int e = 0; e < n; ++e) {
            const Jet<T>& x1 = gamma(c, a, e);
            const Jet<T>& y1 = gamma(e, b, d);
            if (!x1.is_zero() && !y1.is_zero()) v += x1 * y1;
            const Jet<T>& x2 = gamma(c, b, e);
            const Jet<T>& y2 = gamma(e, a, d);
            if (!x2.is_zero() && !y2.is_zero()) v -= x2 * y2;
          }
          R(b, a, c, d) = -v;
          R(a, b, c, d) = std::move(v);
        }
  return R;
}

template <class T>
ProjectiveCurvature<T> decompose(const Tensor<T>& R) {
  const int n = R.dim();
  if (R.slots() != std::vector<Slot>{{Variance::Down, n}, {Variance::Down, n}, {Variance::Up, n}, {Variance::Down, n}})
    throw DimensionMismatch("expected a curvature tensor R_{ab}^c_d");
  if (n < 2) throw DimensionMismatch("projective decomposition needs n >= 2");
  ProjectiveCurvature<T> pc;
  pc.R = R;
  pc.Ric = contract(R, 2, 0);  // Ric_{bd} = R_{cb}^c_d
  pc.beta = contract(R, 2, 3) * ring<T>(1, n + 1);
  pc.P = (pc.Ric + pc.beta) * ring<T>(1, n - 1);
  pc.W = R;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int d = 0; d < n; ++d) {
        // - delta^c_a P_bd + delta^c_b P_ad
        pc.W(a, b, a, d) -= pc.P(b, d);
        pc.W(a, b, b, d) += pc.P(a, d);
        pc.W(a, b, d, d) -= pc.beta(a, b);
      }
    }
  return pc;
}

template <class T>
Tensor<T> reassemble(const ProjectiveCurvature<T>& pc) {
  const int n = pc.W.dim();
  Tensor<T> R = pc.W;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int d = 0; d < n; ++d) {
        R(a, b, a, d) += pc.P(b, d);
        R(a, b, b, d) -= pc.P(a, d);
        R(a, b, d, d) += pc.beta(a, b);
      }
    }
  return R;
}

template <class T>
Tensor<T> covariant_derivative(const Tensor<T>& t, const ConnectionJet<T>& c) {
  const Tensor<T>& gamma = c.gamma;
  check_gamma(gamma);
  const int n = gamma.dim();
  if (t.dim() != n) throw DimensionMismatch("tensor and connection differ in dimension");
  for (const Slot& s : t.slots())
    if (s.extent != n) throw DimensionMismatch("covariant derivative of a tensor with non-tangent slots");
  Tensor<T> out = partial_derivative(t);
  const std::size_t sz = t.size();
  for (std::size_t f = 0; f < sz; ++f) {
    const std::vector<int> idx = t.multi_index(f);
    for (int s = 0; s < t.rank(); ++s) {
      const bool up = t.slot(s).variance == Variance::Up;
      const std::size_t stride = t.stride(s);
      const int own = idx[static_cast<std::size_t>(s)];
      const std::size_t base = f - stride * static_cast<std::size_t>(own);
      for (int e = 0; e < n; ++e) {
        const Jet<T>& te = t[base + stride * static_cast<std::size_t>(e)];
        if (te.is_zero()) continue;
        for (int a = 0; a < n; ++a) {
          // Up: + Gamma^own_{a e} T^{..e..};  Down: - Gamma^e_{a own} T_{..e..}
          const Jet<T>& g = up ? gamma(own, a, e) : gamma(e, a, own);
          if (g.is_zero()) continue;
          Jet<T>& dst = out[static_cast<std::size_t>(a) * sz + f];
          if (up)
            dst += g * te;
          else
            dst -= g * te;
        }
      }
    }
  }
  if (t.weight() != 0) {
    const T w = ring<T>(t.weight(), n + 1);
    for (int a = 0; a < n; ++a) {
      const Jet<T> th = c.theta(a) * w;
      if (th.is_zero()) continue;
      for (std::size_t f = 0; f < sz; ++f)
        if (!t[f].is_zero()) out[static_cast<std::size_t>(a) * sz + f] += th * t[f];
    }
  }
  return out;
}

template <class T>
Tensor<T> covariant_derivative(const Tensor<T>& t, const Tensor<T>& gamma) {
  if (t.weight() != 0) throw PreconditionViolation("weighted tensors need the density connection as well");
  ConnectionJet<T> c;
  c.gamma = gamma;
  c.theta = Tensor<T>::of(gamma.dim(), "d");
  return covariant_derivative(t, c);
}

template <class T>
Tensor<T> cotton(const Tensor<T>& P, const Tensor<T>& gamma) {
  const int n = gamma.dim();
  const Tensor<T> dP = covariant_derivative(P, gamma);  // dP(a, b, d) = nabla_a P_bd
  Tensor<T> C = Tensor<T>::of(n, "ddd");
  C.set_point(dP.point());
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        Jet<T> v = dP(a, b, d) - dP(b, a, d);
        C(d, b, a) = -v;
        C(d, a, b) = std::move(v);
      }
  return C;
}

template <class T>
Tensor<T> weyl_divergence(const Tensor<T>& W, const Tensor<T>& gamma) {
  const Tensor<T> dW = covariant_derivative(W, gamma);  // dW(e, a, b, c, d)
  return contract(dW, 3, 0);
}

template <class T>
std::pair<Tensor<T>, Tensor<T>> schouten_transform(const Tensor<T>& P, const Tensor<T>& beta, const Tensor<T>& upsilon,
                                                   const Tensor<T>& gamma) {
  const int n = gamma.dim();
  const Tensor<T> du = covariant_derivative(upsilon, gamma);  // du(a, b) = nabla_a Upsilon_b
  Tensor<T> Phat = P - du + tensor_product(upsilon, upsilon);
  Tensor<T> bhat = beta;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) bhat(a, b) += du(a, b) - du(b, a);
  return {std::move(Phat), std::move(bhat)};
}

template <class T>
Tensor<T> cotton_transform_residual(const Tensor<T>& gamma, const Tensor<T>& upsilon) {
  const int n = gamma.dim();
  const ProjectiveCurvature<T> pc = projective_curvature(gamma);
  const Tensor<T> C = cotton(pc.P, gamma);
  const Tensor<T> shifted = projective_shift(gamma, upsilon);
  const Tensor<T> Cs = cotton(shifted);
  Tensor<T> res = Cs - C;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const Jet<T>& w = pc.W(i, j, l, k);
          if (!w.is_zero() && !upsilon(l).is_zero()) res(k, i, j) -= w * upsilon(l);
        }
  return res;
}

template <class T>
ScaleReport<T> scale_report(const ConnectionJet<T>& c, double tol) {
  const int n = c.dim();
  ScaleReport<T> r;
  r.F = Tensor<T>::of(n, "dd");
  r.F.set_point(c.gamma.point());
  const Tensor<T> dt = partial_derivative(c.theta);
  const T scale = ring<T>(1, n + 1);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Jet<T> v = (dt(a, b) - dt(b, a)) * scale;
      r.F(b, a) = -v;
      r.F(a, b) = std::move(v);
    }
  r.is_scale = vanishes(r.F, tol);
  return r;
}

#define TK_INSTANTIATE_CURVATURE(T)                                                                        \
  template Tensor<T> riemann(const Tensor<T>&);                                                            \
  template ProjectiveCurvature<T> decompose(const Tensor<T>&);                                             \
  template Tensor<T> reassemble(const ProjectiveCurvature<T>&);                                            \
  template Tensor<T> covariant_derivative(const Tensor<T>&, const ConnectionJet<T>&);                      \
  template Tensor<T> covariant_derivative(const Tensor<T>&, const Tensor<T>&);                             \
  template Tensor<T> cotton(const Tensor<T>&, const Tensor<T>&);                                           \
  template Tensor<T> weyl_divergence(const Tensor<T>&, const Tensor<T>&);                                  \
  template std::pair<Tensor<T>, Tensor<T>> schouten_transform(const Tensor<T>&, const Tensor<T>&,          \
                                                              const Tensor<T>&, const Tensor<T>&);         \
  template Tensor<T> cotton_transform_residual(const Tensor<T>&, const Tensor<T>&);                        \
  template ScaleReport<T> scale_report(const ConnectionJet<T>&, double);

TK_INSTANTIATE_CURVATURE(Rational)
TK_INSTANTIATE_CURVATURE(double)

#undef TK_INSTANTIATE_CURVATURE

}  // namespace tk
