#include "tractorkit/einstein.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tractorkit/linalg.hpp"

namespace tk {

std::string LeftInverseStrategy::describe() const {
  if (kind == Kind::PseudoInverse) return "pseudo-inverse";
  return "natural-q " + q.describe();
}

template <class T>
GenericityReport weak_genericity(const Tensor<T>& W, double tol) {
  const int n = W.dim();
  GenericityReport r;
  const auto flat = weyl_flattening_values(W);
  std::vector<std::vector<double>> fd(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (const T& v : flat[i]) fd[i].push_back(RingTraits<T>::to_double(v));
  const std::vector<double> sv = singular_values(fd);
  r.margin = (sv.empty() || sv.front() == 0.0) ? 0.0 : sv.back() / sv.front();
  if constexpr (RingTraits<T>::exact) {
    r.rank = exact_rank(flat);
    r.ok = r.rank == n;
  } else {
    r.rank = 0;
    for (double s : sv)
      if (!sv.empty() && s > tol * sv.front() && s > 0.0) ++r.rank;
    r.ok = r.margin >= tol;
  }
  if (!r.ok) {
    std::ostringstream os;
    os << "Weyl map T*M -> L2T*M (x) T*M has rank " << r.rank << " < " << n << " (margin " << r.margin << ")";
    r.reason = os.str();
  }
  return r;
}

template <class T>
Tensor<T> left_inverse(const Tensor<T>& W, const LeftInverseStrategy& s, double tol) {
  if (s.kind == LeftInverseStrategy::Kind::PseudoInverse) return left_inverse_flat(W, tol);
  return natural_left_inverse(W, s.q, tol).D;
}

template <class T>
Tensor<T> left_inverse_residual(const Tensor<T>& D, const Tensor<T>& W) {
  Tensor<T> r = contract_product(D, W, {{0, 0}, {1, 1}, {3, 3}});
  Tensor<T> d = permute(delta<T>(W.dim()), {1, 0});
  return r - d;
}

template <class T>
Tensor<T> contract_DC(const Tensor<T>& D, const Tensor<T>& C) {
  return contract_product(D, C, {{0, 1}, {1, 2}, {3, 0}});
}

template <class T>
Tensor<T> G_tensor(const Tensor<T>& P, const Tensor<T>& gamma, const Tensor<T>& X) {
  return P + covariant_derivative(X, gamma) + tensor_product(X, X);
}

template <class T>
Tensor<T> E_tensor(const Tensor<T>& G, const Tensor<T>& gamma, const Tensor<T>& X) {
  const int n = G.dim();
  Tensor<T> E = covariant_derivative(G, gamma);
  const T two = RingTraits<T>::from_rational(Rational(2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet<T>& e = E(i, j, k);
        e += G(j, k) * X(i) * two;
        e += G(j, i) * X(k);
        e += G(i, k) * X(j);
      }
  return E;
}

template <class T>
Tensor<T> E_skew(const Tensor<T>& E) {
  return E - permute(E, {1, 0, 2});
}

template <class T>
Tensor<T> cotton_flat_residual(const Tensor<T>& C, const Tensor<T>& W, const Tensor<T>& X) {
  // C_kij permuted to (i, j, k)
  Tensor<T> r = permute(C, {1, 2, 0});
  const Tensor<T> wx = contract_product(W, X, {{2, 0}});  // (i, j, k)
  return r - wx;
}

template <class T>
Jet<T> gamma_density(const Tensor<T>& G) {
  const int n = G.dim();
  JetMatrix<T> M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = G(i, j);
  return determinant(M) * RingTraits<T>::from_rational(factorial(static_cast<unsigned>(n)).reciprocal());
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::EinsteinNonzero: return "EINSTEIN_NONZERO";
    case Classification::ProjectivelyRicciFlat: return "PROJECTIVELY_RICCI_FLAT";
    case Classification::NotEinstein: return "NOT_EINSTEIN";
    case Classification::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Classification parse_classification(const std::string& s) {
  for (Classification c : {Classification::EinsteinNonzero, Classification::ProjectivelyRicciFlat,
                           Classification::NotEinstein, Classification::Inconclusive})
    if (s == classification_name(c)) return c;
  throw ParseError("unknown classification '" + s + "'");
}

namespace {

char sign_char(double v) { return v > 0 ? '+' : (v < 0 ? '-' : '0'); }

template <class T>
std::string signature_of(const Tensor<T>& G) {
  const int n = G.dim();
  std::string out;
  if constexpr (RingTraits<T>::exact) {
    // Ratios of consecutive leading principal minors of the symmetric part.
    Rational prev(1);
    for (int k = 1; k <= n; ++k) {
      JetMatrix<T> M(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M(i, j) = Jet<T>((G(i, j).value() + G(j, i).value()) * Rational(1, 2));
      const Rational d = determinant(M).value();
      if (prev.is_zero()) {
        out.push_back('?');
      } else {
        out.push_back(sign_char((d / prev).to_double()));
      }
      prev = d;
    }
  } else {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (G(i, j).value() + G(j, i).value());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = n - 1; i >= 0; --i) {
      const double v = es.eigenvalues()(i);
      out.push_back(std::abs(v) <= 1e-12 * scale ? '0' : sign_char(v));
    }
  }
  return out;
}

}  // namespace

template <class T>
EinsteinPoint<T> analyze_point(const ConnectionJet<T>& c, const Point& p, const LeftInverseStrategy& s, double tol) {
  EinsteinPoint<T> pt;
  pt.point = p;
  const ProjectiveCurvature<T> pc = projective_curvature(c.gamma);
  pt.curvature_scale = pc.R.values().max_abs();
  pt.W = pc.W;
  pt.P = pc.P;
  pt.C = cotton(pc.P, c.gamma);
  pt.genericity = weak_genericity(pc.W, tol);
  if (!pt.genericity.ok) {
    pt.failure = pt.genericity.reason;
    return pt;
  }
  try {
    pt.D = left_inverse(pc.W, s, tol);
  } catch (const GenericityFailure& e) {
    pt.failure = e.what();
    return pt;
  }
  pt.X = contract_DC(pt.D, pt.C);
  pt.upsilon = -pt.X;
  pt.G = G_tensor(pt.P, c.gamma, pt.X);
  pt.E = E_tensor(pt.G, c.gamma, pt.X);
  pt.E_skew = E_skew(pt.E);
  pt.cotton_flat = cotton_flat_residual(pt.C, pt.W, pt.X).truncated(0);
  const Tensor<T> Gv = pt.G.values();
  pt.gamma = gamma_density(Gv).value();
  pt.G_norm = Gv.max_abs();
  pt.G_skew_norm = (Gv - permute(Gv, {1, 0})).max_abs();
  pt.E_norm = pt.E.values().max_abs();
  pt.cotton_flat_norm = pt.cotton_flat.max_abs();
  pt.signature = signature_of(Gv);
  pt.evaluated = true;
  return pt;
}

template <class T>
Verdict<T> classify(std::vector<EinsteinPoint<T>> points, const LeftInverseStrategy& s, double tol) {
  Verdict<T> v;
  v.strategy = s.describe();
  v.points = std::move(points);
  auto at = [](std::size_t i) { return "point " + std::to_string(i); };
  auto done = [&](Classification c, std::string key, std::string why) {
    v.classification = c;
    v.criterion = std::move(key);
    v.reason = std::move(why);
    return v;
  };
  if (v.points.empty()) return done(Classification::Inconclusive, "genericity", "no sample points");

  constexpr bool exact = RingTraits<T>::exact;
  // Float thresholds scale with the curvature: G ~ kappa, E and C ~ kappa^(3/2).
  auto small = [&](double value, const EinsteinPoint<T>& p, double power) {
    if constexpr (exact) return value == 0.0;
    const double kappa = std::max(p.curvature_scale, 1e-300);
    return value <= tol * std::pow(kappa, power);
  };
  auto zero_tensor = [&](const Tensor<T>& t, const EinsteinPoint<T>& p, double power) {
    if constexpr (exact) return t.is_zero();
    return small(t.max_abs(), p, power);
  };

  // P = 0 makes the connection itself the Ricci-flat representative (C = 0,
  // so X = 0 and G = P), which settles points the left inverse cannot reach,
  // the flat model among them.
  bool all_p_zero = true;
  for (const auto& p : v.points)
    if (!zero_tensor(p.P.values(), p, 1.0)) all_p_zero = false;
  for (std::size_t i = 0; i < v.points.size(); ++i) {
    const auto& p = v.points[i];
    if ((!p.genericity.ok || !p.evaluated) && all_p_zero)
      return done(Classification::ProjectivelyRicciFlat, "G-zero", "P_ij = 0 at every sample point, so G = P = 0 with Upsilon = 0");
    if (!p.genericity.ok) return done(Classification::Inconclusive, "genericity", "not weakly generic at " + at(i) + ": " + p.genericity.reason);
    if (!p.evaluated) return done(Classification::Inconclusive, "left-inverse", "no left inverse at " + at(i) + ": " + p.failure);
  }

  bool all_g_zero = true;
  for (const auto& p : v.points)
    if (!zero_tensor(p.G.values(), p, 1.0)) all_g_zero = false;
  if (all_g_zero) return done(Classification::ProjectivelyRicciFlat, "G-zero", "G_ij = 0 at every sample point");

  for (std::size_t i = 0; i < v.points.size(); ++i)
    if (!zero_tensor(v.points[i].cotton_flat, v.points[i], 1.5))
      return done(Classification::NotEinstein, "cotton-flat",
                  "cotton-flat obstruction: 2E_[ij]k != 0 at " + at(i) + ", so no Cotton-flat connection lies in the class");
  for (std::size_t i = 0; i < v.points.size(); ++i) {
    const auto& p = v.points[i];
    const Tensor<T> Gv = p.G.values();
    if (!zero_tensor(Gv - permute(Gv, {1, 0}), p, 1.0))
      return done(Classification::NotEinstein, "G-skew", "G_[ij] != 0 at " + at(i));
  }
  for (std::size_t i = 0; i < v.points.size(); ++i)
    if (!zero_tensor(v.points[i].E.values(), v.points[i], 1.5))
      return done(Classification::NotEinstein, "E", "E_ijk != 0 at " + at(i));
  for (std::size_t i = 0; i < v.points.size(); ++i) {
    const auto& p = v.points[i];
    const int n = p.G.dim();
    bool degenerate;
    if constexpr (exact) {
      degenerate = RingTraits<T>::is_zero(p.gamma);
    } else {
      const double g = std::abs(RingTraits<T>::to_double(p.gamma)) * std::tgamma(n + 1.0);
      degenerate = g <= tol * std::pow(std::max(p.G_norm, 1e-300), n);
    }
    if (degenerate) {
      if constexpr (exact) return done(Classification::NotEinstein, "gamma", "G_ij is degenerate (gamma = 0) at " + at(i));
      return done(Classification::Inconclusive, "gamma", "G_ij is numerically degenerate at " + at(i));
    }
  }
  return done(Classification::EinsteinNonzero, "all-pass", "E = 0, G symmetric and gamma != 0 at every sample point");
}

template <class T>
Verdict<T> verdict(const std::function<ConnectionJet<T>(const Point&)>& jets, const std::vector<Point>& points,
                   const LeftInverseStrategy& s, double tol) {
  std::vector<EinsteinPoint<T>> pts;
  pts.reserve(points.size());
  for (const Point& p : points) pts.push_back(analyze_point(jets(p), p, s, tol));
  return classify(std::move(pts), s, tol);
}

template <class T>
Verdict<T> verdict(const ConnectionSource& src, const std::vector<Point>& points, const LeftInverseStrategy& s, double tol) {
  return verdict<T>([&](const Point& p) { return connection_jet<T>(src, p, kMaxChristoffelOrder); }, points, s, tol);
}

#define TK_INSTANTIATE_EINSTEIN(T)                                                                                   \
  template GenericityReport weak_genericity(const Tensor<T>&, double);                                               \
  template Tensor<T> left_inverse(const Tensor<T>&, const LeftInverseStrategy&, double);                             \
  template Tensor<T> left_inverse_residual(const Tensor<T>&, const Tensor<T>&);                                      \
  template Tensor<T> contract_DC(const Tensor<T>&, const Tensor<T>&);                                                \
  template Tensor<T> G_tensor(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                                 \
  template Tensor<T> E_tensor(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                                 \
  template Tensor<T> E_skew(const Tensor<T>&);                                                                       \
  template Tensor<T> cotton_flat_residual(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                     \
  template Jet<T> gamma_density(const Tensor<T>&);                                                                   \
  template EinsteinPoint<T> analyze_point(const ConnectionJet<T>&, const Point&, const LeftInverseStrategy&, double); \
  template Verdict<T> classify(std::vector<EinsteinPoint<T>>, const LeftInverseStrategy&, double);                   \
  template Verdict<T> verdict(const std::function<ConnectionJet<T>(const Point&)>&, const std::vector<Point>&,       \
                              const LeftInverseStrategy&, double);                                                   \
  template Verdict<T> verdict(const ConnectionSource&, const std::vector<Point>&, const LeftInverseStrategy&, double);

TK_INSTANTIATE_EINSTEIN(Rational)
TK_INSTANTIATE_EINSTEIN(double)

#undef TK_INSTANTIATE_EINSTEIN

}  // namespace tk
