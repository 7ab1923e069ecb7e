#include <doctest.h>

#include <random>

#include "symbolic.hpp"
#include "support.hpp"
#include "tractorkit/curvature.hpp"
#include "tractorkit/generators.hpp"

using tk::ExactTensor;
using tk::Expr;
using tk::Rational;

namespace {

/// Compares every partial derivative of Gamma up to the jet's order with
/// the symbolic oracle.
void check_gamma_against_oracle(const ExactTensor& gamma, const std::vector<sym::E>& oracle, const tk::Point& p) {
  const int n = gamma.dim();
  const int order = gamma.min_order();
  const tk::JetLayout& L = tk::JetLayout::get(n, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (std::size_t idx = 0; idx < L.size(); ++idx) {
          const auto a = L.exponent(idx);
          const std::vector<int> alpha(a.begin(), a.end());
          const sym::E& e = oracle[static_cast<std::size_t>((i * n + j) * n + k)];
          CHECK(gamma(i, j, k).derivative(alpha) == sym::eval(sym::d(e, alpha), p));
        }
}

}  // namespace

TEST_CASE("expression parsing errors") {
  CHECK_THROWS_AS(Expr::parse("x1 + * x2", 2), tk::ParseError);
  CHECK_THROWS_AS(Expr::parse("x3", 2), tk::ParseError);
  CHECK_THROWS_AS(Expr::parse("(x1", 2), tk::ParseError);
  CHECK_THROWS_AS(Expr::parse("x1^-1", 2), tk::ParseError);
  CHECK(Expr::parse("3/2*x1^2 - x2/(1 + x1)", 2).is_rational());
  CHECK_FALSE(Expr::parse("sin(x1)", 2).is_rational());
}

TEST_CASE("evaluation at a pole is a singularity") {
  const Expr e = Expr::parse("1/(x1 - 1/2)", 1);
  const auto x = testing::coords(testing::point({Rational(1, 2)}), 2);
  CHECK_THROWS_AS(e.evaluate<Rational>(x), tk::EvaluationSingularity);
}

TEST_CASE("flat connection gives the zero jet") {
  const auto g = tk::christoffel_jet<Rational>(tk::ConnectionSource::flat(3), testing::random_point(3, 1), 4);
  CHECK(g.is_zero());
  CHECK(tk::projective_curvature(g).R.is_zero());
}

TEST_CASE("round S2 Levi-Civita jet matches the symbolic oracle") {
  const sym::E conf = sym::c(4) / sym::pow(sym::c(1) + sym::x(0) * sym::x(0) + sym::x(1) * sym::x(1), 2);
  const auto oracle = sym::diagonal_christoffel({conf, conf});
  const tk::Builtin b = tk::builtin("sphere", 2);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const tk::Point p = testing::random_point(2, 20 + s);
    check_gamma_against_oracle(tk::christoffel_jet<Rational>(b.source, p, 3), oracle, p);
  }
}

TEST_CASE("toy metric diag(1, 1 + x1^2) against hand and symbolic formulas") {
  const tk::ConnectionSource src = tk::ConnectionSource::from_metric(
      2, {Expr::parse("1", 2), Expr::parse("0", 2), Expr::parse("0", 2), Expr::parse("1 + x1^2", 2)});
  const tk::Point p = testing::point({Rational(1, 3), Rational(-2)});
  const ExactTensor g = tk::christoffel_jet<Rational>(src, p, 2);
  // Gamma^1_22 = -x1, Gamma^2_12 = x1 / (1 + x1^2)
  CHECK(g(0, 1, 1).value() == Rational(-1, 3));
  CHECK(g(1, 0, 1).value() == Rational(1, 3) / Rational(10, 9));
  CHECK(g(1, 1, 0) == g(1, 0, 1));
  CHECK(g(0, 0, 0).is_zero());
  const sym::E h = sym::c(1) + sym::x(0) * sym::x(0);
  check_gamma_against_oracle(g, sym::diagonal_christoffel({sym::c(1), h}), p);
}

TEST_CASE("Levi-Civita jets are metric: nabla g = 0") {
  for (const char* name : {"sphere", "hyperbolic", "s2xs2", "schwarzschild-u"}) {
    CAPTURE(name);
    const tk::Builtin b = tk::builtin(name, 3);
    const tk::Point p = b.chart.sample_points()[0];
    const ExactTensor g = tk::metric_jet<Rational>(b.source, p, 4);
    const ExactTensor gamma = tk::levi_civita(g);
    CHECK(gamma.min_order() == 3);
    CHECK(tk::covariant_derivative(g, gamma).is_zero());
  }
}

TEST_CASE("projective shifts form a group and keep torsion zero") {
  std::mt19937_64 rng(12);
  for (int n : {2, 3}) {
    const tk::ConnectionSource src = tk::random_polynomial_connection(n, 2, rng);
    const tk::OneFormField u = tk::random_polynomial_one_form(n, 2, rng);
    const tk::Point p = testing::random_point(n, 77);
    const ExactTensor gamma = tk::christoffel_jet<Rational>(src, p, 3);
    const ExactTensor up = tk::one_form_jet<Rational>(u, p, 3);
    CHECK(tk::projective_shift(gamma, ExactTensor::of(n, "d")) == gamma);
    const ExactTensor shifted = tk::projective_shift(gamma, up);
    CHECK(tk::permute(shifted, {0, 2, 1}) == shifted);
    CHECK(tk::projective_shift(shifted, -up) == gamma);
  }
}

TEST_CASE("torsion in the Christoffel table is rejected") {
  std::vector<Expr> t(8, Expr::constant(0));
  t[1] = Expr::parse("x1", 2);  // Gamma^1_12 without Gamma^1_21
  const auto src = tk::ConnectionSource::christoffel(2, t);
  CHECK_THROWS_AS(tk::christoffel_jet<Rational>(src, testing::point({0, 0}), 1), tk::PreconditionViolation);
}

TEST_CASE("prescribed-Weyl connection: Gamma = S x / 3 and Weyl at the origin is A") {
  const ExactTensor A = tk::random_weyl_tensor(4, 5);
  REQUIRE(tk::weyl_type_violation(A).empty());
  const tk::ConnectionSource src = tk::generate_prescribed_weyl(A);
  const tk::Point origin(4, Rational(0));
  const ExactTensor g = tk::christoffel_jet<Rational>(src, origin, 2);
  const int n = 4;
  for (int a = 0; a < n; ++a) {
    std::vector<int> alpha(4, 0);
    alpha[static_cast<std::size_t>(a)] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          CHECK(g(i, j, k).value().is_zero());
          const Rational S = A(a, j, i, k).value() + A(a, k, i, j).value();
          CHECK(g(i, j, k).derivative(alpha) == S / Rational(3));
        }
  }
  const auto pc = tk::projective_curvature(g);
  CHECK(pc.W.values() == A);
  // Symmetric Ricci tensor away from the origin too.
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto gp = tk::christoffel_jet<Rational>(src, testing::random_point(4, 300 + s), 1);
    const ExactTensor Ric = tk::projective_curvature(gp).Ric;
    CHECK(Ric == tk::permute(Ric, {1, 0}));
  }
}

TEST_CASE("generate_prescribed_weyl rejects tensors that are not of Weyl type") {
  ExactTensor A = ExactTensor::of(3, "ddud");
  A(0, 1, 0, 1) = tk::ExactJet(Rational(1));
  A(1, 0, 0, 1) = tk::ExactJet(Rational(-1));
  CHECK_FALSE(tk::weyl_type_violation(A).empty());
  CHECK_THROWS_AS(tk::generate_prescribed_weyl(A), tk::PreconditionViolation);
  CHECK(tk::projective_curvature(tk::christoffel_jet<Rational>(
                                     tk::generate_prescribed_weyl(ExactTensor::of(3, "ddud")), testing::point({1, 2, 3}), 1))
            .R.is_zero());
}

TEST_CASE("builtin Einstein metrics satisfy Ric = (n - 1) lambda g") {
  for (int n : {2, 3, 4}) {
    for (const char* name : {"sphere", "hyperbolic"}) {
      CAPTURE(name);
      CAPTURE(n);
      const tk::Builtin b = tk::builtin(name, n);
      REQUIRE(b.einstein_lambda);
      for (const auto& p : b.chart.sample_points()) {
        const auto c = tk::connection_jet<Rational>(b.source, p, 1);
        const ExactTensor Ric = tk::projective_curvature(c.gamma).Ric;
        CHECK((Ric - *c.metric * (Rational(n - 1) * *b.einstein_lambda)).is_zero());
      }
    }
  }
  for (const char* name : {"s2xs2", "schwarzschild-u"}) {
    CAPTURE(name);
    const tk::Builtin b = tk::builtin(name);
    REQUIRE(b.einstein_lambda);
    const auto c = tk::connection_jet<Rational>(b.source, b.chart.sample_points()[1], 1);
    const ExactTensor Ric = tk::projective_curvature(c.gamma).Ric;
    CHECK((Ric - *c.metric * (Rational(3) * *b.einstein_lambda)).is_zero());
  }
  const tk::Builtin s = tk::builtin("schwarzschild");
  CHECK(s.float_only);
  CHECK_FALSE(s.source.is_rational());
  for (const auto& p : s.chart.sample_points()) {
    const auto c = tk::connection_jet<double>(s.source, p, 1);
    CHECK(tk::projective_curvature(c.gamma).Ric.max_abs() < 1e-12);
  }
}

TEST_CASE("seeded sample points are deterministic and inside the box") {
  const tk::ChartSpec c = tk::ChartSpec::cube(3, Rational(-1, 2), Rational(1, 2), 7, 99);
  const auto a = c.sample_points();
  CHECK(a.size() == 7);
  CHECK(a == c.sample_points());
  for (const auto& p : a) CHECK(c.contains(p));
  tk::ChartSpec bad = c;
  bad.points.push_back({Rational(2), Rational(0), Rational(0)});
  CHECK_THROWS_AS(bad.sample_points(), tk::DimensionMismatch);
  CHECK_THROWS_AS(tk::builtin("no-such-connection"), tk::ParseError);
}
