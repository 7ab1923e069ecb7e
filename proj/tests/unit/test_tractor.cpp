#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tractorkit/generators.hpp"
#include "tractorkit/tractor.hpp"

using tk::ExactTensor;
using tk::Rational;

namespace {

ExactTensor random_scalar(int n, const tk::Point& p, int order, std::mt19937_64& rng) {
  const tk::Expr e = tk::Polynomial::random(n, 2, rng).to_expr();
  return ExactTensor::scalar(n, e.evaluate<Rational>(testing::coords(p, order)));
}

ExactTensor random_vector(int n, const tk::Point& p, int order, std::mt19937_64& rng) {
  const ExactTensor f = tk::one_form_jet<Rational>(tk::random_polynomial_one_form(n, 2, rng), p, order);
  ExactTensor v = ExactTensor::of(n, "u");
  for (int i = 0; i < n; ++i) v(i) = f(i);
  return v;
}

}  // namespace

TEST_CASE("splitting operators pair as documented") {
  for (int n = 2; n <= 5; ++n) CHECK(tk::splitting_is_consistent(tk::tractor_splitting<Rational>(n)));
}

TEST_CASE("the tractor connection commutes with changes of splitting") {
  std::mt19937_64 rng(31);
  for (int n : {2, 3, 4}) {
    CAPTURE(n);
    const auto src = tk::random_polynomial_connection(n, 2, rng);
    const auto u = tk::random_polynomial_one_form(n, 2, rng);
    const tk::Point p = testing::random_point(n, 80 + static_cast<std::uint64_t>(n));
    const auto c = tk::connection_jet<Rational>(src, p, 3);
    const ExactTensor up = tk::one_form_jet<Rational>(u, p, 3);
    const auto tc = tk::tractor_connection(c);
    const auto tch = tk::tractor_connection(tk::projective_shift(c, up));

    const ExactTensor mu = tk::one_form_jet<Rational>(tk::random_polynomial_one_form(n, 2, rng), p, 3);
    const ExactTensor U = tk::make_cotractor(mu, random_scalar(n, p, 3, rng));
    const ExactTensor dU = tk::cotractor_derivative(U, tc);
    CHECK(tk::cotractor_derivative(tk::change_splitting(U, up), tch) == tk::change_splitting(dU, up));
    CHECK(tk::tractor_covariant_derivative(U, tc) == dU);

    const ExactTensor V = tk::make_tractor(random_vector(n, p, 3, rng), random_scalar(n, p, 3, rng));
    const ExactTensor dV = tk::tractor_derivative(V, tc);
    CHECK(tk::tractor_derivative(tk::change_splitting(V, up), tch) == tk::change_splitting(dV, up));
    CHECK(tk::tractor_covariant_derivative(V, tc) == dV);
  }
}

TEST_CASE("Omega is the curvature of the tractor connection and kills X") {
  std::mt19937_64 rng(32);
  for (int n : {2, 3, 4}) {
    CAPTURE(n);
    const auto src = tk::random_polynomial_connection(n, 2, rng);
    const tk::Point p = testing::random_point(n, 90 + static_cast<std::uint64_t>(n));
    const auto c = tk::connection_jet<Rational>(src, p, 3);
    const auto tc = tk::tractor_connection(c);
    const auto pc = tk::projective_curvature(c.gamma);
    const ExactTensor Omega = tk::tractor_curvature(pc.W, tk::cotton(pc.P, c.gamma));
    const ExactTensor V = tk::make_tractor(random_vector(n, p, 3, rng), random_scalar(n, p, 3, rng));
    const ExactTensor ddV = tk::tractor_covariant_derivative(tk::tractor_covariant_derivative(V, tc), tc);
    const ExactTensor commutator = ddV - tk::permute(ddV, {1, 0, 2});
    CHECK((commutator - tk::contract_product(Omega, V, {{3, 0}})).is_zero());
    CHECK(tk::curvature_on_X(Omega).is_zero());
  }
}

TEST_CASE("Einstein submetrics are parallel and Omega is h-skew") {
  for (const char* name : {"sphere", "hyperbolic", "s2xs2"}) {
    CAPTURE(name);
    const tk::Builtin b = tk::builtin(name, 3);
    for (const auto& p : b.chart.sample_points()) {
      const auto c = tk::connection_jet<Rational>(b.source, p, 2);
      const auto tc = tk::tractor_connection(c);
      const ExactTensor h = tk::einstein_submetric(tc, *b.einstein_lambda);
      CHECK(tk::submetric_derivative(h, tc).is_zero());
      CHECK(tk::tractor_covariant_derivative(h, tc).is_zero());
      const auto pc = tk::projective_curvature(c.gamma);
      const ExactTensor Omega = tk::tractor_curvature(pc.W, tk::cotton(pc.P, c.gamma));
      CHECK(tk::skew_residual(Omega, h).is_zero());
    }
  }
}

TEST_CASE("einstein_submetric checks the Einstein condition") {
  const tk::ConnectionSource src = tk::ConnectionSource::from_metric(
      3, {tk::Expr::parse("1", 3), tk::Expr::parse("0", 3), tk::Expr::parse("0", 3), tk::Expr::parse("0", 3),
          tk::Expr::parse("1 + x1^2", 3), tk::Expr::parse("0", 3), tk::Expr::parse("0", 3), tk::Expr::parse("0", 3),
          tk::Expr::parse("1", 3)});
  const auto tc = tk::tractor_connection(tk::connection_jet<Rational>(src, testing::point({1, 0, 0}), 2));
  CHECK_THROWS_AS(tk::einstein_submetric(tc, Rational(0)), tk::PreconditionViolation);
  CHECK_THROWS_AS(tk::einstein_submetric(tc, Rational(1)), tk::PreconditionViolation);
}

TEST_CASE("the diagonalizing shift removes the mixed block") {
  const int n = 3;
  const tk::Builtin b = tk::builtin("sphere", n);
  const tk::Point p = b.chart.sample_points()[0];
  const auto c = tk::connection_jet<Rational>(b.source, p, 2);
  ExactTensor v = ExactTensor::of(n, "u");
  v(0) = tk::ExactJet(Rational(1));
  v(2) = tk::ExactJet(Rational(-3, 2));
  const ExactTensor ginv = tk::inverse_metric(*c.metric);
  ExactTensor tau = ExactTensor::scalar(n, tk::ExactJet(Rational(2)));
  const ExactTensor h = tk::make_submetric(ginv, v, tau);
  const auto tc = tk::tractor_connection(c);
  CHECK_THROWS_AS(tk::submetric_derivative(h, tc), tk::PreconditionViolation);
  const ExactTensor shifted = tk::change_splitting(h, tk::diagonalizing_shift(h));
  CHECK(tk::submetric_v(shifted).is_zero());
  CHECK(tk::submetric_g(shifted) == tk::submetric_g(h));
}
