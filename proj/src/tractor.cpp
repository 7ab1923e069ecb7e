#include "tractorkit/tractor.hpp"

#include "tractorkit/linalg.hpp"

namespace tk {

namespace {

template <class T>
T ring(long num, long den = 1) {
  return RingTraits<T>::from_rational(Rational(num, den));
}

template <class T>
void check_tractor_slot(const Tensor<T>& t, Variance v, const char* what) {
  const int n = t.dim();
  if (t.rank() != 1 || t.slot(0) != Slot{v, n + 1}) throw DimensionMismatch(std::string("expected a ") + what);
}

template <class T>
bool small(const Tensor<T>& t, double scale) {
  return vanishes(t, RingTraits<T>::exact ? 0.0 : 1e-9 * std::max(1.0, scale));
}

}  // namespace

template <class T>
TractorSplitting<T> tractor_splitting(int n) {
  TractorSplitting<T> s;
  s.X = Tensor<T>(n, {{Variance::Up, n + 1}});
  s.Y = Tensor<T>(n, {{Variance::Down, n + 1}});
  s.Z = Tensor<T>(n, {{Variance::Down, n + 1}, {Variance::Up, n}});
  s.Yvec = Tensor<T>(n, {{Variance::Up, n + 1}, {Variance::Down, n}});
  s.X(n) = Jet<T>(T(1));
  s.Y(n) = Jet<T>(T(1));
  for (int a = 0; a < n; ++a) {
    s.Z(a, a) = Jet<T>(T(1));
    s.Yvec(a, a) = Jet<T>(T(1));
  }
  return s;
}

template <class T>
bool splitting_is_consistent(const TractorSplitting<T>& s) {
  const int n = s.X.dim();
  const Tensor<T> xy = contract_product(s.X, s.Y, {{0, 0}});
  const Tensor<T> zy = contract_product(s.Z, s.Yvec, {{0, 0}});  // (a, b): Z_A^a Y^A_b
  const Tensor<T> xz = contract_product(s.X, s.Z, {{0, 0}});
  const Tensor<T> yy = contract_product(s.Yvec, s.Y, {{0, 0}});
  Tensor<T> one = Tensor<T>::scalar(n, Jet<T>(T(1)));
  return (xy - one).is_zero() && (zy - delta<T>(n)).is_zero() && xz.is_zero() && yy.is_zero();
}

template <class T>
Tensor<T> make_cotractor(const Tensor<T>& mu, const Tensor<T>& sigma) {
  const int n = mu.dim();
  Tensor<T> U(n, {{Variance::Down, n + 1}});
  U.set_point(mu.point());
  for (int b = 0; b < n; ++b) U(b) = mu(b);
  U(n) = sigma[0];
  return U;
}

template <class T>
Tensor<T> make_tractor(const Tensor<T>& nu, const Tensor<T>& rho) {
  const int n = nu.dim();
  Tensor<T> V(n, {{Variance::Up, n + 1}});
  V.set_point(nu.point());
  for (int b = 0; b < n; ++b) V(b) = nu(b);
  V(n) = rho[0];
  return V;
}

template <class T>
TractorConnection<T> tractor_connection(const ConnectionJet<T>& c) {
  TractorConnection<T> tc;
  tc.connection = c;
  tc.P = projective_curvature(c.gamma).P;
  const int n = c.dim();
  tc.A = Tensor<T>(n, {{Variance::Down, n}, {Variance::Up, n + 1}, {Variance::Down, n + 1}});
  tc.A.set_point(c.gamma.point());
  const T w = ring<T>(-1, n + 1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) tc.A(a, b, e) = c.gamma(b, a, e);
    tc.A(a, a, n) += Jet<T>(T(1));
    for (int e = 0; e < n; ++e) tc.A(a, n, e) = -tc.P(a, e);
    // Tractor components carry density weight -1 (tractors) / +1 (cotractors).
    const Jet<T> th = c.theta(a) * w;
    for (int C = 0; C <= n; ++C) tc.A(a, C, C) += th;
  }
  return tc;
}

template <class T>
Tensor<T> tractor_covariant_derivative(const Tensor<T>& t, const TractorConnection<T>& tc) {
  const int n = tc.dim();
  const Tensor<T>& gamma = tc.connection.gamma;
  if (t.dim() != n) throw DimensionMismatch("tensor and connection differ in dimension");
  Tensor<T> out = partial_derivative(t);
  const std::size_t sz = t.size();
  for (std::size_t f = 0; f < sz; ++f) {
    const std::vector<int> idx = t.multi_index(f);
    for (int s = 0; s < t.rank(); ++s) {
      const Slot& slot = t.slot(s);
      const bool up = slot.variance == Variance::Up;
      const bool tractor = slot.extent == n + 1;
      if (!tractor && slot.extent != n) throw DimensionMismatch("slot is neither tangent nor projective tractor");
      const std::size_t stride = t.stride(s);
      const int own = idx[static_cast<std::size_t>(s)];
      const std::size_t base = f - stride * static_cast<std::size_t>(own);
      for (int e = 0; e < slot.extent; ++e) {
        const Jet<T>& te = t[base + stride * static_cast<std::size_t>(e)];
        if (te.is_zero()) continue;
        for (int a = 0; a < n; ++a) {
          const Jet<T>& g = tractor ? (up ? tc.A(a, own, e) : tc.A(a, e, own)) : (up ? gamma(own, a, e) : gamma(e, a, own));
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
      const Jet<T> th = tc.connection.theta(a) * w;
      if (th.is_zero()) continue;
      for (std::size_t f = 0; f < sz; ++f)
        if (!t[f].is_zero()) out[static_cast<std::size_t>(a) * sz + f] += th * t[f];
    }
  }
  return out;
}

template <class T>
Tensor<T> cotractor_derivative(const Tensor<T>& U, const TractorConnection<T>& tc) {
  check_tractor_slot(U, Variance::Down, "cotractor (Down, extent n + 1)");
  const int n = tc.dim();
  Tensor<T> mu = Tensor<T>::of(n, "d", 1);
  for (int b = 0; b < n; ++b) mu(b) = U(b);
  const Tensor<T> sigma = Tensor<T>::scalar(n, U(n), 1);
  const Tensor<T> dmu = covariant_derivative(mu, tc.connection);
  const Tensor<T> dsigma = covariant_derivative(sigma, tc.connection);
  Tensor<T> out(n, {{Variance::Down, n}, {Variance::Down, n + 1}});
  out.set_point(U.point());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) out(a, b) = dmu(a, b) + tc.P(a, b) * U(n);
    out(a, n) = dsigma(a) - U(a);
  }
  return out;
}

template <class T>
Tensor<T> tractor_derivative(const Tensor<T>& V, const TractorConnection<T>& tc) {
  check_tractor_slot(V, Variance::Up, "tractor (Up, extent n + 1)");
  const int n = tc.dim();
  Tensor<T> nu = Tensor<T>::of(n, "u", -1);
  for (int b = 0; b < n; ++b) nu(b) = V(b);
  const Tensor<T> rho = Tensor<T>::scalar(n, V(n), -1);
  const Tensor<T> dnu = covariant_derivative(nu, tc.connection);
  const Tensor<T> drho = covariant_derivative(rho, tc.connection);
  Tensor<T> out(n, {{Variance::Down, n}, {Variance::Up, n + 1}});
  out.set_point(V.point());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) out(a, b) = dnu(a, b);
    out(a, a) += V(n);
    Jet<T> acc = drho(a);
    for (int b = 0; b < n; ++b)
      if (!V(b).is_zero()) acc -= tc.P(a, b) * V(b);
    out(a, n) = std::move(acc);
  }
  return out;
}

template <class T>
Tensor<T> change_splitting(const Tensor<T>& t, const Tensor<T>& upsilon) {
  const int n = t.dim();
  Tensor<T> out = t;
  for (int s = 0; s < t.rank(); ++s) {
    const Slot& slot = t.slot(s);
    if (slot.extent != n + 1) continue;
    const std::size_t stride = out.stride(s);
    Tensor<T> next = out;
    for (std::size_t f = 0; f < out.size(); ++f) {
      const int own = static_cast<int>((f / stride) % static_cast<std::size_t>(n + 1));
      const std::size_t base = f - stride * static_cast<std::size_t>(own);
      if (slot.variance == Variance::Down) {
        // (mu_b + Upsilon_b sigma | sigma)
        if (own < n) next[f] += upsilon(own) * out[base + stride * static_cast<std::size_t>(n)];
      } else if (own == n) {
        // rho - Upsilon_b nu^b
        for (int b = 0; b < n; ++b) {
          const Jet<T>& nb = out[base + stride * static_cast<std::size_t>(b)];
          if (!nb.is_zero()) next[f] -= upsilon(b) * nb;
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

template <class T>
Tensor<T> tractor_curvature(const Tensor<T>& W, const Tensor<T>& C) {
  const int n = W.dim();
  Tensor<T> omega(n, {{Variance::Down, n}, {Variance::Down, n}, {Variance::Up, n + 1}, {Variance::Down, n + 1}});
  omega.set_point(W.point());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        for (int c = 0; c < n; ++c) omega(a, b, c, d) = W(a, b, c, d);
        omega(a, b, n, d) = -C(d, a, b);
      }
  return omega;
}

template <class T>
Tensor<T> curvature_on_X(const Tensor<T>& omega) {
  const TractorSplitting<T> s = tractor_splitting<T>(omega.dim());
  return contract_product(omega, s.X, {{3, 0}});
}

template <class T>
Tensor<T> make_submetric(const Tensor<T>& g_up, const Tensor<T>& v, const Tensor<T>& tau) {
  const int n = g_up.dim();
  Tensor<T> h(n, {{Variance::Up, n + 1}, {Variance::Up, n + 1}});
  h.set_point(g_up.point());
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < n; ++c) h(b, c) = g_up(b, c);
    h(b, n) = v(b);
    h(n, b) = v(b);
  }
  h(n, n) = tau[0];
  h.stamp({Symmetry::Symmetric, 0, 1}, RingTraits<T>::exact ? 0.0 : 1e-12);
  return h;
}

template <class T>
Tensor<T> submetric_g(const Tensor<T>& h) {
  const int n = h.dim();
  Tensor<T> g = Tensor<T>::of(n, "uu", -2);
  g.set_point(h.point());
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) g(b, c) = h(b, c);
  return g;
}

template <class T>
Tensor<T> submetric_v(const Tensor<T>& h) {
  const int n = h.dim();
  Tensor<T> v = Tensor<T>::of(n, "u", -2);
  v.set_point(h.point());
  for (int b = 0; b < n; ++b) v(b) = h(b, n);
  return v;
}

template <class T>
Tensor<T> submetric_tau(const Tensor<T>& h) {
  Tensor<T> t = Tensor<T>::scalar(h.dim(), h(h.dim(), h.dim()), -2);
  t.set_point(h.point());
  return t;
}

template <class T>
Tensor<T> einstein_submetric(const TractorConnection<T>& tc, const T& lambda) {
  if (!tc.connection.metric) throw PreconditionViolation("Einstein sub-metric needs a metric connection");
  const Tensor<T>& g = *tc.connection.metric;
  const int n = g.dim();
  const Tensor<T> residual = tc.P - g * lambda;
  if (!small(residual, g.max_abs() * std::abs(RingTraits<T>::to_double(lambda))))
    throw PreconditionViolation("metric is not Einstein with the given constant (P != lambda g)");
  Tensor<T> gi = inverse_metric(g);
  gi.set_weight(-2);
  Tensor<T> v = Tensor<T>::of(n, "u", -2);
  Tensor<T> tau = Tensor<T>::scalar(n, Jet<T>(lambda), -2);
  return make_submetric(gi, v, tau);
}

template <class T>
Tensor<T> submetric_derivative(const Tensor<T>& h, const TractorConnection<T>& tc) {
  const int n = tc.dim();
  if (!small(submetric_v(h), h.max_abs())) throw PreconditionViolation("sub-metric is not diagonal in this splitting");
  const Tensor<T> g = submetric_g(h);
  const Tensor<T> tau = submetric_tau(h);
  const Tensor<T> dg = covariant_derivative(g, tc.connection);
  const Tensor<T> dtau = covariant_derivative(tau, tc.connection);
  Tensor<T> out(n, {{Variance::Down, n}, {Variance::Up, n + 1}, {Variance::Up, n + 1}});
  out.set_point(h.point());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a, b, c) = dg(a, b, c);
    for (int c = 0; c < n; ++c) {
      Jet<T> acc;
      if (a == c) acc += tau[0];
      for (int b = 0; b < n; ++b)
        if (!g(b, c).is_zero()) acc -= g(b, c) * tc.P(a, b);
      out(a, c, n) = acc;
      out(a, n, c) = std::move(acc);
    }
    out(a, n, n) = dtau(a);
  }
  return out;
}

template <class T>
Tensor<T> diagonalizing_shift(const Tensor<T>& h) {
  const int n = h.dim();
  JetMatrix<T> gm(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gm(a, b) = h(a, b);
  const DetAdj<T> da = det_adj(gm);
  if (RingTraits<T>::is_zero(da.det.value())) throw PreconditionViolation("g block of the sub-metric is degenerate");
  const Jet<T> inv = da.det.reciprocal();
  Tensor<T> u = Tensor<T>::of(n, "d");
  u.set_point(h.point());
  for (int b = 0; b < n; ++b) {
    Jet<T> acc;
    for (int a = 0; a < n; ++a)
      if (!h(a, n).is_zero()) acc += da.adj(b, a) * h(a, n);
    u(b) = acc * inv;
  }
  return u;
}

template <class T>
Tensor<T> skew_residual(const Tensor<T>& omega, const Tensor<T>& h) {
  const int n = h.dim();
  const int N = n + 1;
  JetMatrix<T> hm(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) hm(a, b) = h(a, b);
  const DetAdj<T> da = det_adj(hm);
  Tensor<T> res(n, {{Variance::Down, n}, {Variance::Down, n}, {Variance::Down, N}, {Variance::Down, N}});
  res.set_point(omega.point());
  if (!RingTraits<T>::is_zero(da.det.value())) {
    const Jet<T> inv = da.det.reciprocal();
    Tensor<T> low = res;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int C = 0; C < N; ++C)
          for (int D = 0; D < N; ++D) {
            Jet<T> acc;
            for (int E = 0; E < N; ++E)
              if (!omega(a, b, E, D).is_zero() && !da.adj(C, E).is_zero()) acc += da.adj(C, E) * omega(a, b, E, D);
            low(a, b, C, D) = acc * inv;
          }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int C = 0; C < N; ++C)
          for (int D = 0; D < N; ++D) res(a, b, C, D) = low(a, b, C, D) + low(a, b, D, C);
    return res;
  }
  Tensor<T> raised(n, {{Variance::Down, n}, {Variance::Down, n}, {Variance::Up, N}, {Variance::Up, N}});
  raised.set_point(omega.point());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int C = 0; C < N; ++C)
        for (int E = 0; E < N; ++E) {
          Jet<T> acc;
          for (int D = 0; D < N; ++D) {
            if (!omega(a, b, C, D).is_zero() && !h(D, E).is_zero()) acc += omega(a, b, C, D) * h(D, E);
            if (!omega(a, b, E, D).is_zero() && !h(D, C).is_zero()) acc += omega(a, b, E, D) * h(D, C);
          }
          raised(a, b, C, E) = std::move(acc);
        }
  return raised;
}

#define TK_INSTANTIATE_TRACTOR(T)                                                                   \
  template TractorSplitting<T> tractor_splitting<T>(int);                                           \
  template bool splitting_is_consistent(const TractorSplitting<T>&);                                \
  template Tensor<T> make_cotractor(const Tensor<T>&, const Tensor<T>&);                            \
  template Tensor<T> make_tractor(const Tensor<T>&, const Tensor<T>&);                              \
  template TractorConnection<T> tractor_connection(const ConnectionJet<T>&);                        \
  template Tensor<T> cotractor_derivative(const Tensor<T>&, const TractorConnection<T>&);           \
  template Tensor<T> tractor_derivative(const Tensor<T>&, const TractorConnection<T>&);             \
  template Tensor<T> tractor_covariant_derivative(const Tensor<T>&, const TractorConnection<T>&);   \
  template Tensor<T> change_splitting(const Tensor<T>&, const Tensor<T>&);                          \
  template Tensor<T> tractor_curvature(const Tensor<T>&, const Tensor<T>&);                         \
  template Tensor<T> curvature_on_X(const Tensor<T>&);                                              \
  template Tensor<T> make_submetric(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);          \
  template Tensor<T> submetric_g(const Tensor<T>&);                                                 \
  template Tensor<T> submetric_v(const Tensor<T>&);                                                 \
  template Tensor<T> submetric_tau(const Tensor<T>&);                                               \
  template Tensor<T> einstein_submetric(const TractorConnection<T>&, const T&);                     \
  template Tensor<T> submetric_derivative(const Tensor<T>&, const TractorConnection<T>&);           \
  template Tensor<T> diagonalizing_shift(const Tensor<T>&);                                         \
  template Tensor<T> skew_residual(const Tensor<T>&, const Tensor<T>&);

TK_INSTANTIATE_TRACTOR(Rational)
TK_INSTANTIATE_TRACTOR(double)

#undef TK_INSTANTIATE_TRACTOR

}  // namespace tk
