#include "tractorkit/conformal.hpp"

#include <cmath>

namespace tk {

namespace {

template <class T>
T ring(const Rational& r) {
  return RingTraits<T>::from_rational(r);
}

template <class T>
bool near_zero(const Tensor<T>& t, double scale, double tol) {
  if constexpr (RingTraits<T>::exact) {
    (void)scale;
    (void)tol;
    return t.is_zero();
  } else {
    return t.max_abs() <= tol * std::max(1.0, scale);
  }
}

}  // namespace

template <class T>
ConnectionJet<T> MetricGeometry<T>::connection() const {
  ConnectionJet<T> c;
  c.gamma = gamma;
  c.theta = Tensor<T>::of(g.dim(), "d");
  c.theta.set_point(g.point());
  c.metric = g;
  return c;
}

template <class T>
MetricGeometry<T> metric_geometry(const Tensor<T>& g) {
  MetricGeometry<T> m;
  m.g = g;
  m.ginv = inverse_metric(g);
  m.gamma = levi_civita(g);
  return m;
}

template <class T>
ConformalCurvature<T> conformal_decompose(const MetricGeometry<T>& m) {
  const int n = m.dim();
  if (n < 3) throw DimensionMismatch("conformal decomposition needs n >= 3");
  ConformalCurvature<T> cc;
  const Tensor<T> R = riemann(m.gamma);
  cc.R_low = permute(contract_product(R, m.g, {{2, 0}}), {0, 1, 3, 2});  // g_ce R_ab^e_d
  cc.Ric = contract(R, 2, 0);
  Jet<T> sc;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!m.ginv(a, b).is_zero() && !cc.Ric(a, b).is_zero()) sc += m.ginv(a, b) * cc.Ric(a, b);
  cc.J = sc * ring<T>(Rational(1, 2 * (n - 1)));
  cc.P = (cc.Ric - m.g * cc.J) * ring<T>(Rational(1, n - 2));
  cc.W_low = cc.R_low;
  const Tensor<T>& g = m.g;
  const Tensor<T>& P = cc.P;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet<T>& w = cc.W_low(a, b, c, d);
          // 2 g_c[a P_b]d + 2 g_d[b P_a]c
          if (!g(c, a).is_zero()) w -= g(c, a) * P(b, d);
          if (!g(c, b).is_zero()) w += g(c, b) * P(a, d);
          if (!g(d, b).is_zero()) w -= g(d, b) * P(a, c);
          if (!g(d, a).is_zero()) w += g(d, a) * P(b, c);
        }
  cc.W = permute(contract_product(cc.W_low, m.ginv, {{2, 0}}), {0, 1, 3, 2});  // g^ce W_abed
  return cc;
}

template <class T>
Tensor<T> conformal_reassembly_residual(const ConformalCurvature<T>& cc, const Tensor<T>& g) {
  const int n = g.dim();
  Tensor<T> r = cc.R_low - cc.W_low;
  const Tensor<T>& P = cc.P;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet<T>& x = r(a, b, c, d);
          x -= g(c, a) * P(b, d) - g(c, b) * P(a, d);
          x -= g(d, b) * P(a, c) - g(d, a) * P(b, c);
        }
  return r;
}

template <class T>
Tensor<T> conformal_ricci_residual(const ConformalCurvature<T>& cc, const Tensor<T>& g) {
  const int n = g.dim();
  return cc.Ric - cc.P * ring<T>(Rational(n - 2)) - g * cc.J;
}

template <class T>
std::optional<T> einstein_constant(const MetricGeometry<T>& m, double tol) {
  const int n = m.dim();
  const Tensor<T> P = projective_curvature(m.gamma).P;
  T trace(0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) trace += m.ginv(a, b).value() * P(a, b).value();
  const T lambda = trace * ring<T>(Rational(1, n));
  const Tensor<T> res = P - m.g * lambda;
  if (!near_zero(res, P.max_abs(), tol)) return std::nullopt;
  return lambda;
}

template <class T>
WeylComparison<T> compare_weyl(const MetricGeometry<T>& m, double tol) {
  WeylComparison<T> w;
  const ConformalCurvature<T> cc = conformal_decompose(m);
  w.residual = cc.W - projective_curvature(m.gamma).W;
  w.einstein = einstein_constant(m, tol).has_value();
  return w;
}

template <class T>
SchoutenHalving<T> schouten_halving_check(const MetricGeometry<T>& m, double tol) {
  const auto lambda = einstein_constant(m, tol);
  if (!lambda) throw PreconditionViolation("Schouten halving needs an Einstein metric");
  SchoutenHalving<T> s;
  s.lambda = *lambda;
  const ConformalCurvature<T> cc = conformal_decompose(m);
  const Tensor<T> P = projective_curvature(m.gamma).P;
  s.residual = cc.P - P * ring<T>(Rational(1, 2));
  s.lambda_residual = P - m.g * s.lambda;
  s.J = cc.J.value();
  return s;
}

template <class T>
Tensor<T> make_conformal_cotractor(const Tensor<T>& tau, const Tensor<T>& mu, const Tensor<T>& sigma) {
  const int n = mu.dim();
  Tensor<T> V(n, {{Variance::Down, n + 2}});
  V.set_point(mu.point());
  V(0) = tau[0];
  for (int b = 0; b < n; ++b) V(b + 1) = mu(b);
  V(n + 1) = sigma[0];
  return V;
}

template <class T>
Tensor<T> conformal_tractor_derivative(const Tensor<T>& V, const MetricGeometry<T>& m, const ConformalCurvature<T>& cc) {
  const int n = m.dim();
  if (V.rank() != 1 || V.slot(0) != Slot{Variance::Down, n + 2}) throw DimensionMismatch("expected a conformal cotractor");
  Tensor<T> mu = Tensor<T>::of(n, "d");
  for (int b = 0; b < n; ++b) mu(b) = V(b + 1);
  const Tensor<T> dtau = covariant_derivative(Tensor<T>::scalar(n, V(0)), m.gamma);
  const Tensor<T> dmu = covariant_derivative(mu, m.gamma);
  const Tensor<T> dsigma = covariant_derivative(Tensor<T>::scalar(n, V(n + 1)), m.gamma);
  Tensor<T> out(n, {{Variance::Down, n}, {Variance::Down, n + 2}});
  out.set_point(V.point());
  for (int a = 0; a < n; ++a) {
    Jet<T> top = dtau(a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (!cc.P(a, b).is_zero() && !m.ginv(b, c).is_zero() && !mu(c).is_zero()) top -= cc.P(a, b) * m.ginv(b, c) * mu(c);
    out(a, 0) = std::move(top);
    for (int b = 0; b < n; ++b) out(a, b + 1) = dmu(a, b) + m.g(a, b) * V(0) + cc.P(a, b) * V(n + 1);
    out(a, n + 1) = dsigma(a) - mu(a);
  }
  return out;
}

template <class T>
Tensor<T> conformal_tractor_derivative_up(const Tensor<T>& I, const MetricGeometry<T>& m, const ConformalCurvature<T>& cc) {
  const int n = m.dim();
  const int N = n + 2;
  if (I.rank() != 1 || I.slot(0) != Slot{Variance::Up, N}) throw DimensionMismatch("expected a conformal tractor");
  // nabla_a V_beta = d_a V_beta + A(a, beta, gamma) V_gamma on cotractors.
  Tensor<T> A(n, {{Variance::Down, n}, {Variance::Down, N}, {Variance::Up, N}});
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      Jet<T> s;
      for (int b = 0; b < n; ++b)
        if (!cc.P(a, b).is_zero() && !m.ginv(b, c).is_zero()) s -= cc.P(a, b) * m.ginv(b, c);
      A(a, 0, c + 1) = std::move(s);
    }
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) A(a, b + 1, c + 1) = -m.gamma(c, a, b);
      A(a, b + 1, 0) = m.g(a, b);
      A(a, b + 1, n + 1) = cc.P(a, b);
    }
    A(a, n + 1, a + 1) = Jet<T>(ring<T>(Rational(-1)));
  }
  Tensor<T> out = partial_derivative(I);
  for (int a = 0; a < n; ++a)
    for (int beta = 0; beta < N; ++beta)
      for (int g = 0; g < N; ++g)
        if (!A(a, g, beta).is_zero() && !I(g).is_zero()) out(a, beta) -= A(a, g, beta) * I(g);
  return out;
}

template <class T>
Jet<T> conformal_tractor_metric(const Tensor<T>& V, const Tensor<T>& Vp, const Tensor<T>& ginv) {
  const int n = ginv.dim();
  Jet<T> h = V(n + 1) * Vp(0) + V(0) * Vp(n + 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!ginv(a, b).is_zero()) h += ginv(a, b) * V(a + 1) * Vp(b + 1);
  return h;
}

template <class T>
Tensor<T> parallel_tractor(const ConformalCurvature<T>& cc, int n) {
  Tensor<T> I(n, {{Variance::Up, n + 2}});
  I(0) = Jet<T>(ring<T>(Rational(1)));
  I(n + 1) = -(cc.J * ring<T>(Rational(1, n)));
  return I;
}

template <class T>
Tensor<T> iota(const Tensor<T>& U, const Jet<T>& J) {
  const int n = U.dim();
  if (U.rank() != 1 || U.slot(0) != Slot{Variance::Down, n + 1}) throw DimensionMismatch("expected a projective cotractor");
  Tensor<T> V(n, {{Variance::Down, n + 2}});
  V.set_point(U.point());
  V(0) = J * U(n) * ring<T>(Rational(1, n));
  for (int b = 0; b < n; ++b) V(b + 1) = U(b);
  V(n + 1) = U(n);
  return V;
}

template <class T>
IotaReport<T> iota_checks(const MetricGeometry<T>& m, const Tensor<T>& U, const Tensor<T>& Up, double tol) {
  const int n = m.dim();
  if (!einstein_constant(m, tol)) throw PreconditionViolation("the inclusion of tractor bundles needs an Einstein metric");
  const ConformalCurvature<T> cc = conformal_decompose(m);
  IotaReport<T> r;
  r.lambda = cc.J.value() * ring<T>(Rational(2, n));

  const Tensor<T> iU = iota(U, cc.J);
  const Tensor<T> I = parallel_tractor(cc, n);
  Jet<T> pairing;
  for (int b = 0; b < n + 2; ++b)
    if (!I(b).is_zero()) pairing += iU(b) * I(b);
  r.annihilation = pairing;

  const TractorConnection<T> tc = tractor_connection(m.connection());
  const Tensor<T> dU = cotractor_derivative(U, tc);  // (a, B)
  const Tensor<T> diU = conformal_tractor_derivative(iU, m, cc);
  r.connection = diU;
  for (int a = 0; a < n; ++a) {
    Tensor<T> slice(n, {{Variance::Down, n + 1}});
    for (int B = 0; B <= n; ++B) slice(B) = dU(a, B);
    const Tensor<T> is = iota(slice, cc.J);
    for (int b = 0; b < n + 2; ++b) r.connection(a, b) -= is(b);
  }

  Jet<T> h = conformal_tractor_metric(iU, iota(Up, cc.J), m.ginv);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!m.ginv(a, b).is_zero()) h -= m.ginv(a, b) * U(a) * Up(b);
  h -= U(n) * Up(n) * r.lambda;
  r.metric = h;
  return r;
}

template <class T>
Tensor<T> weyl_square_residual(const ConformalCurvature<T>& cc, const MetricGeometry<T>& m) {
  const int n = m.dim();
  // Wup(i, j, k, m) = W^{ij}_k^m = g^ia g^jb g^md W_abkd
  Tensor<T> t = contract_product(m.ginv, cc.W_low, {{1, 0}});   // (i, b, k, d)
  t = contract_product(m.ginv, t, {{1, 1}});                    // (j, i, k, d)
  t = contract_product(m.ginv, t, {{1, 3}});                    // (m, j, i, k)
  const Tensor<T> Wup = permute(t, {2, 1, 3, 0});               // (i, j, k, m)
  Tensor<T> lhs = contract_product(cc.W, Wup, {{0, 0}, {1, 1}, {2, 2}}) * ring<T>(Rational(4));  // (l, m)
  Jet<T> norm;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (!cc.W(i, j, k, l).is_zero() && !Wup(i, j, k, l).is_zero()) norm += cc.W(i, j, k, l) * Wup(i, j, k, l);
  Tensor<T> d = permute(delta<T>(n), {1, 0}) * norm;
  return lhs - d;
}

template <class T>
Tensor<T> conformal_connection_change(const MetricGeometry<T>& m, const Tensor<T>& upsilon) {
  const int n = m.dim();
  Tensor<T> out = m.gamma;
  for (int c = 0; c < n; ++c) {
    Jet<T> uc;
    for (int d = 0; d < n; ++d)
      if (!m.ginv(c, d).is_zero()) uc += m.ginv(c, d) * upsilon(d);
    for (int a = 0; a < n; ++a) {
      out(c, a, c) += upsilon(a);
      out(c, c, a) += upsilon(a);
      for (int b = 0; b < n; ++b)
        if (!m.g(a, b).is_zero()) out(c, a, b) -= m.g(a, b) * uc;
    }
  }
  return out;
}

#define TK_INSTANTIATE_CONFORMAL(T)                                                                                   \
  template struct MetricGeometry<T>;                                                                                  \
  template MetricGeometry<T> metric_geometry(const Tensor<T>&);                                                       \
  template ConformalCurvature<T> conformal_decompose(const MetricGeometry<T>&);                                       \
  template Tensor<T> conformal_reassembly_residual(const ConformalCurvature<T>&, const Tensor<T>&);                   \
  template Tensor<T> conformal_ricci_residual(const ConformalCurvature<T>&, const Tensor<T>&);                        \
  template std::optional<T> einstein_constant(const MetricGeometry<T>&, double);                                      \
  template WeylComparison<T> compare_weyl(const MetricGeometry<T>&, double);                                          \
  template SchoutenHalving<T> schouten_halving_check(const MetricGeometry<T>&, double);                               \
  template Tensor<T> make_conformal_cotractor(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                  \
  template Tensor<T> conformal_tractor_derivative(const Tensor<T>&, const MetricGeometry<T>&,                         \
                                                  const ConformalCurvature<T>&);                                      \
  template Tensor<T> conformal_tractor_derivative_up(const Tensor<T>&, const MetricGeometry<T>&,                      \
                                                     const ConformalCurvature<T>&);                                   \
  template Jet<T> conformal_tractor_metric(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                     \
  template Tensor<T> parallel_tractor(const ConformalCurvature<T>&, int);                                             \
  template Tensor<T> iota(const Tensor<T>&, const Jet<T>&);                                                           \
  template IotaReport<T> iota_checks(const MetricGeometry<T>&, const Tensor<T>&, const Tensor<T>&, double);           \
  template Tensor<T> weyl_square_residual(const ConformalCurvature<T>&, const MetricGeometry<T>&);                    \
  template Tensor<T> conformal_connection_change(const MetricGeometry<T>&, const Tensor<T>&);

TK_INSTANTIATE_CONFORMAL(Rational)
TK_INSTANTIATE_CONFORMAL(double)

#undef TK_INSTANTIATE_CONFORMAL

}  // namespace tk
