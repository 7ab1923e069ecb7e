#include "tractorkit/connection.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "tractorkit/generators.hpp"
#include "tractorkit/linalg.hpp"

namespace tk {

ChartSpec ChartSpec::cube(int dim, Rational lo, Rational hi, int random_count, std::uint64_t seed) {
  ChartSpec c;
  c.dim = dim;
  c.box.assign(static_cast<std::size_t>(dim), {lo, hi});
  c.random_count = random_count;
  c.seed = seed;
  return c;
}

bool ChartSpec::contains(const Point& p) const {
  if (static_cast<int>(p.size()) != dim || box.size() != p.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < box[i].first || p[i] > box[i].second) return false;
  return true;
}

std::vector<Point> ChartSpec::sample_points() const {
  std::vector<Point> out;
  for (const auto& p : points) {
    if (!contains(p)) throw DimensionMismatch("sample point outside the chart box");
    out.push_back(p);
  }
  const auto extra = random_points(box, random_count, seed);
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

std::vector<Point> random_points(const std::vector<std::pair<Rational, Rational>>& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  const Rational grid(1, 16);
  for (int c = 0; c < count; ++c) {
    Point p;
    for (const auto& [lo, hi] : box) {
      const Rational steps_q = (hi - lo) * Rational(16);
      const mpz_class steps = steps_q.numerator() / steps_q.denominator();
      const unsigned long m = steps.get_ui() + 1;
      const unsigned long pick = static_cast<unsigned long>(rng() % m);
      p.push_back(lo + Rational(static_cast<long>(pick)) * grid);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------

ConnectionSource ConnectionSource::flat(int dim) {
  ConnectionSource s;
  s.kind = Kind::Christoffel;
  s.dim = dim;
  s.name = "flat";
  s.gamma.assign(static_cast<std::size_t>(dim * dim * dim), Expr::constant(Rational(0)));
  return s;
}

ConnectionSource ConnectionSource::christoffel(int dim, std::vector<Expr> gamma, std::string name) {
  if (static_cast<int>(gamma.size()) != dim * dim * dim) throw DimensionMismatch("Christoffel table must have n^3 entries");
  ConnectionSource s;
  s.kind = Kind::Christoffel;
  s.dim = dim;
  s.name = std::move(name);
  s.gamma = std::move(gamma);
  return s;
}

ConnectionSource ConnectionSource::from_metric(int dim, std::vector<Expr> metric, std::string name) {
  if (static_cast<int>(metric.size()) != dim * dim) throw DimensionMismatch("metric table must have n^2 entries");
  ConnectionSource s;
  s.kind = Kind::Metric;
  s.dim = dim;
  s.name = std::move(name);
  s.metric = std::move(metric);
  return s;
}

bool ConnectionSource::is_rational() const {
  const auto& table = kind == Kind::Metric ? metric : gamma;
  return std::all_of(table.begin(), table.end(), [](const Expr& e) { return e.is_rational(); });
}

OneFormField OneFormField::zero(int dim) {
  return {std::vector<Expr>(static_cast<std::size_t>(dim), Expr::constant(Rational(0)))};
}

bool OneFormField::is_rational() const {
  return std::all_of(components.begin(), components.end(), [](const Expr& e) { return e.is_rational(); });
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
BasePoint shared_point(const Point& p) {
  return std::make_shared<const Point>(p);
}

void check_order(int order) {
  if (order < 0 || order > kMaxChristoffelOrder)
    throw InsufficientOrder("Christoffel jet order must lie in 0.." + std::to_string(kMaxChristoffelOrder));
}

}  // namespace

template <class T>
std::vector<Jet<T>> coordinate_jets(const Point& p, int order) {
  const JetLayout& layout = JetLayout::get(static_cast<int>(p.size()), order);
  std::vector<Jet<T>> x;
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    x.push_back(Jet<T>::variable(layout, i, RingTraits<T>::from_rational(p[static_cast<std::size_t>(i)])));
  return x;
}

template <class T>
Tensor<T> metric_jet(const ConnectionSource& src, const Point& p, int order) {
  if (src.kind != ConnectionSource::Kind::Metric) throw PreconditionViolation("connection source has no metric");
  if (static_cast<int>(p.size()) != src.dim) throw DimensionMismatch("point dimension differs from the connection");
  const int n = src.dim;
  const auto x = coordinate_jets<T>(p, order);
  Tensor<T> g = Tensor<T>::of(n, "dd");
  g.set_point(shared_point<T>(p));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = src.metric[static_cast<std::size_t>(i * n + j)].evaluate<T>(x).lifted(JetLayout::get(n, order));
  g.stamp({Symmetry::Symmetric, 0, 1}, RingTraits<T>::exact ? 0.0 : 1e-12);
  return g;
}

template <class T>
Tensor<T> inverse_metric(const Tensor<T>& g) {
  const int n = g.dim();
  JetMatrix<T> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  const DetAdj<T> da = det_adj(m);
  if (RingTraits<T>::is_zero(da.det.value())) throw PreconditionViolation("metric is degenerate at the base point");
  const Jet<T> inv = da.det.reciprocal();
  Tensor<T> gi = Tensor<T>::of(n, "uu");
  gi.set_point(g.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gi(i, j) = da.adj(i, j) * inv;
  return gi;
}

template <class T>
Tensor<T> levi_civita(const Tensor<T>& g) {
  const int n = g.dim();
  const Tensor<T> gi = inverse_metric(g);
  const Tensor<T> dg = partial_derivative(g);  // dg(l, i, j) = d_l g_{ij}
  Tensor<T> gamma = Tensor<T>::of(n, "udd");
  gamma.set_point(g.point());
  const T half = RingTraits<T>::from_rational(Rational(1, 2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Jet<T> acc;
        for (int l = 0; l < n; ++l) {
          const Jet<T>& a = gi(i, l);
          if (a.is_zero()) continue;
          Jet<T> s = dg(j, l, k) + dg(k, l, j) - dg(l, j, k);
          if (!s.is_zero()) acc += a * s;
        }
        acc *= half;
        gamma(i, j, k) = acc;
        gamma(i, k, j) = std::move(acc);
      }
  return gamma;
}

template <class T>
Tensor<T> christoffel_jet(const ConnectionSource& src, const Point& p, int order) {
  check_order(order);
  if (static_cast<int>(p.size()) != src.dim) throw DimensionMismatch("point dimension differs from the connection");
  if (src.kind == ConnectionSource::Kind::Metric) return levi_civita(metric_jet<T>(src, p, order + 1));
  const int n = src.dim;
  const auto x = coordinate_jets<T>(p, order);
  Tensor<T> gamma = Tensor<T>::of(n, "udd");
  gamma.set_point(shared_point<T>(p));
  for (std::size_t f = 0; f < gamma.size(); ++f) {
    // Constant entries still carry the layout so jet orders stay uniform.
    gamma[f] = src.gamma[f].evaluate<T>(x).lifted(JetLayout::get(n, order));
  }
  try {
    gamma.stamp({Symmetry::Symmetric, 1, 2}, RingTraits<T>::exact ? 0.0 : 1e-12);
  } catch (const PreconditionViolation&) {
    throw PreconditionViolation("Christoffel symbols are not symmetric in the lower indices (connection has torsion)");
  }
  return gamma;
}

template <class T>
ConnectionJet<T> connection_jet(const ConnectionSource& src, const Point& p, int order) {
  ConnectionJet<T> c;
  const int n = src.dim;
  c.theta = Tensor<T>::of(n, "d");
  c.theta.set_point(shared_point<T>(p));
  if (src.kind == ConnectionSource::Kind::Metric) {
    check_order(order);
    c.metric = metric_jet<T>(src, p, order + 1);
    c.gamma = levi_civita(*c.metric);
    c.theta.set_point(c.gamma.point());
  } else {
    c.gamma = christoffel_jet<T>(src, p, order);
    for (int a = 0; a < n; ++a) {
      Jet<T> acc;
      for (int k = 0; k < n; ++k) acc += c.gamma(k, a, k);
      c.theta(a) = std::move(acc);
    }
  }
  return c;
}

template <class T>
Tensor<T> levi_civita(const ConnectionSource& src, const Point& p, int order) {
  check_order(order);
  return levi_civita(metric_jet<T>(src, p, order + 1));
}

template <class T>
Tensor<T> one_form_jet(const OneFormField& u, const Point& p, int order) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(u.components.size()) != n) throw DimensionMismatch("one-form has the wrong number of components");
  const auto x = coordinate_jets<T>(p, order);
  Tensor<T> t = Tensor<T>::of(n, "d");
  t.set_point(shared_point<T>(p));
  for (int i = 0; i < n; ++i) {
    t(i) = u.components[static_cast<std::size_t>(i)].evaluate<T>(x).lifted(JetLayout::get(n, order));
  }
  return t;
}

template <class T>
Tensor<T> projective_shift(const Tensor<T>& gamma, const Tensor<T>& upsilon) {
  const int n = gamma.dim();
  if (upsilon.dim() != n || upsilon.rank() != 1 || upsilon.slot(0).variance != Variance::Down)
    throw DimensionMismatch("projective shift needs a one-form of the connection's dimension");
  Tensor<T> out = gamma;
  out.set_point(gamma.point() ? gamma.point() : upsilon.point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out(i, j, i) += upsilon(j);
      out(i, i, j) += upsilon(j);
    }
  return out;
}

template <class T>
ConnectionJet<T> projective_shift(const ConnectionJet<T>& c, const Tensor<T>& upsilon) {
  ConnectionJet<T> out;
  out.gamma = projective_shift(c.gamma, upsilon);
  out.theta = c.theta + upsilon * RingTraits<T>::from_rational(Rational(c.dim() + 1));
  return out;
}

#define TK_INSTANTIATE_CONNECTION(T)                                                         \
  template std::vector<Jet<T>> coordinate_jets<T>(const Point&, int);                        \
  template Tensor<T> christoffel_jet<T>(const ConnectionSource&, const Point&, int);         \
  template ConnectionJet<T> connection_jet<T>(const ConnectionSource&, const Point&, int);   \
  template Tensor<T> metric_jet<T>(const ConnectionSource&, const Point&, int);              \
  template Tensor<T> inverse_metric<T>(const Tensor<T>&);                                    \
  template Tensor<T> levi_civita<T>(const Tensor<T>&);                                       \
  template Tensor<T> levi_civita<T>(const ConnectionSource&, const Point&, int);             \
  template Tensor<T> one_form_jet<T>(const OneFormField&, const Point&, int);                \
  template Tensor<T> projective_shift<T>(const Tensor<T>&, const Tensor<T>&);                \
  template ConnectionJet<T> projective_shift<T>(const ConnectionJet<T>&, const Tensor<T>&);

TK_INSTANTIATE_CONNECTION(Rational)
TK_INSTANTIATE_CONNECTION(double)

#undef TK_INSTANTIATE_CONNECTION

// ---------------------------------------------------------------------------

namespace {

std::string squared_norm(int from, int to) {
  std::string s = "1";
  for (int i = from; i <= to; ++i) s += "+x" + std::to_string(i) + "^2";
  return s;
}

std::vector<Expr> diagonal_metric(int n, const std::vector<std::string>& diag) {
  std::vector<Expr> g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.push_back(i == j ? Expr::parse(diag[static_cast<std::size_t>(i)], n) : Expr::constant(Rational(0)));
  return g;
}

Builtin conformally_flat(const std::string& name, int n, const std::string& sign, Rational half_box, Rational lambda,
                         const std::string& what) {
  // 4 / (1 + s |x|^2)^2 delta
  std::string denom = "1";
  for (int i = 1; i <= n; ++i) denom += sign + "x" + std::to_string(i) + "^2";
  const std::string conf = "4/(" + denom + ")^2";
  Builtin b;
  b.name = name;
  b.description = what + " of dimension " + std::to_string(n) + ", g = " + conf + " delta";
  b.source = ConnectionSource::from_metric(n, diagonal_metric(n, std::vector<std::string>(static_cast<std::size_t>(n), conf)), name);
  b.chart = ChartSpec::cube(n, -half_box, half_box);
  b.einstein_lambda = lambda;
  return b;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"flat", "sphere", "hyperbolic", "s2xs2", "schwarzschild", "schwarzschild-u", "prescribed-weyl", "omega-b"};
}

Builtin builtin(const std::string& name, int dim) {
  if (name == "flat") {
    Builtin b;
    b.name = name;
    b.description = "flat connection Gamma = 0 on R^" + std::to_string(dim) + " (Euclidean metric)";
    b.source = ConnectionSource::from_metric(dim, diagonal_metric(dim, std::vector<std::string>(static_cast<std::size_t>(dim), "1")), name);
    b.chart = ChartSpec::cube(dim, Rational(-1), Rational(1));
    b.einstein_lambda = Rational(0);
    return b;
  }
  if (name == "sphere")
    return conformally_flat(name, dim, "+", Rational(1), Rational(1), "unit round sphere in stereographic coordinates");
  if (name == "hyperbolic")
    return conformally_flat(name, dim, "-", Rational(1, 2), Rational(-1), "unit hyperbolic space in the ball model");
  if (name == "s2xs2") {
    const std::string a = "4/(" + squared_norm(1, 2) + ")^2";
    const std::string c = "4/(" + squared_norm(3, 4) + ")^2";
    Builtin b;
    b.name = name;
    b.description = "product of two unit 2-spheres, each in stereographic coordinates (x1,x2) and (x3,x4)";
    b.source = ConnectionSource::from_metric(4, diagonal_metric(4, {a, a, c, c}), name);
    b.chart = ChartSpec::cube(4, Rational(-1), Rational(1));
    b.einstein_lambda = Rational(1, 3);
    return b;
  }
  if (name == "schwarzschild") {
    Builtin b;
    b.name = name;
    b.description = "Schwarzschild exterior, mass 1, coordinates (t, r, theta, phi); float ring only";
    b.source = ConnectionSource::from_metric(
        4, diagonal_metric(4, {"-(1-2/x2)", "1/(1-2/x2)", "x2^2", "x2^2*sin(x3)^2"}), name);
    b.chart.dim = 4;
    b.chart.box = {{Rational(0), Rational(1)}, {Rational(3), Rational(6)}, {Rational(1, 2), Rational(5, 2)}, {Rational(0), Rational(1)}};
    b.einstein_lambda = Rational(0);
    b.float_only = true;
    return b;
  }
  if (name == "schwarzschild-u") {
    Builtin b;
    b.name = name;
    b.description = "Schwarzschild exterior, mass 1, coordinates (t, r, u = cos theta, phi); rational";
    b.source = ConnectionSource::from_metric(
        4, diagonal_metric(4, {"-(1-2/x2)", "1/(1-2/x2)", "x2^2/(1-x3^2)", "x2^2*(1-x3^2)"}), name);
    b.chart.dim = 4;
    b.chart.box = {{Rational(0), Rational(1)}, {Rational(3), Rational(6)}, {Rational(-1, 2), Rational(1, 2)}, {Rational(0), Rational(1)}};
    b.einstein_lambda = Rational(0);
    return b;
  }
  if (name == "prescribed-weyl") {
    Builtin b;
    b.name = name;
    b.description = "polynomial connection Gamma^i_jk = (1/3) S_aj^i_k x^a with a fixed generic Weyl tensor at the origin, n = 4";
    b.source = generate_prescribed_weyl(random_weyl_tensor(4, kDefaultSeed));
    b.source.name = name;
    b.chart = ChartSpec::cube(4, Rational(-1, 2), Rational(1, 2));
    b.chart.points = {Point(4, Rational(0))};
    b.chart.random_count = 4;
    return b;
  }
  if (name == "omega-b") {
    Builtin b;
    b.name = name;
    b.description = "prescribed-Weyl connection for A = 2 w_ab B_d^c - w_da B_b^c - w_bd B_a^c, n = 9, k = 3";
    b.source = generate_prescribed_weyl(*omega_b_weyl(9, 3));
    b.source.name = name;
    b.chart = ChartSpec::cube(9, Rational(-1, 2), Rational(1, 2));
    b.chart.points = {Point(9, Rational(0))};
    b.chart.random_count = 0;
    return b;
  }
  throw ParseError("unknown builtin '" + name + "'");
}

}  // namespace tk
