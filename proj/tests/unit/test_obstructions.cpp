#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tractorkit/curvature.hpp"
#include "tractorkit/generators.hpp"
#include "tractorkit/obstructions.hpp"
#include "tractorkit/tractor.hpp"

using tk::ExactTensor;
using tk::Rational;

namespace {

Rational factorial(int m) {
  Rational r(1);
  for (int i = 2; i <= m; ++i) r *= Rational(i);
  return r;
}

}  // namespace

TEST_CASE("p_form agrees with the brute-force alternation") {
  std::mt19937_64 rng(41);
  for (int n : {2, 3, 4}) {
    CAPTURE(n);
    const auto c = tk::connection_jet<Rational>(tk::random_polynomial_connection(n, 2, rng), testing::random_point(n, 5), 2);
    const auto pc = tk::projective_curvature(c.gamma);
    const ExactTensor Omega = tk::tractor_curvature(pc.W, tk::cotton(pc.P, c.gamma));
    for (int k = 1; 2 * k <= n; ++k) {
      CAPTURE(k);
      CHECK(tk::p_form(pc.R, k) == tk::p_form_bruteforce(pc.R, k));
      // Omega mixes jet orders (W one above C), so compare values.
      CHECK((tk::p_form(Omega, k) - tk::p_form_bruteforce(Omega, k)).is_zero());
    }
    CHECK_THROWS_AS(tk::p_form(pc.R, n / 2 + 1), tk::DimensionMismatch);
  }
}

TEST_CASE("curvature and Weyl forms agree for scale connections, tractor forms always") {
  std::mt19937_64 rng(42);
  for (int n : {4, 5}) {
    CAPTURE(n);
    const auto scale = tk::christoffel_jet<Rational>(tk::random_polynomial_connection(n, 2, rng, true), testing::random_point(n, 6), 1);
    const auto ps = tk::projective_curvature(scale);
    for (int k = 1; 2 * k <= n; ++k) CHECK(tk::p_form(ps, k, tk::ChernInput::Curvature) == tk::p_form(ps, k, tk::ChernInput::Weyl));

    const auto generic = tk::connection_jet<Rational>(tk::random_polynomial_connection(n, 2, rng), testing::random_point(n, 7), 2);
    const auto pg = tk::projective_curvature(generic.gamma);
    CHECK_THROWS_AS(tk::p_form(pg, 1, tk::ChernInput::Curvature), tk::PreconditionViolation);
    const ExactTensor Omega = tk::tractor_curvature(pg.W, tk::cotton(pg.P, generic.gamma));
    for (int k = 1; 2 * k <= n; ++k) CHECK(tk::q_form(Omega, k) == tk::p_form(pg, k, tk::ChernInput::Weyl));
  }
}

TEST_CASE("the first form vanishes for Levi-Civita connections") {
  for (const char* name : {"sphere", "hyperbolic", "s2xs2", "schwarzschild-u"}) {
    CAPTURE(name);
    const tk::Builtin b = tk::builtin(name, 4);
    const auto pc = tk::projective_curvature(tk::christoffel_jet<Rational>(b.source, b.chart.sample_points()[0], 1));
    CHECK(tk::p_form(pc, 1, tk::ChernInput::Curvature).is_zero());
    CHECK(tk::p_form(pc, 1, tk::ChernInput::Weyl).is_zero());
  }
}

TEST_CASE("second form of a scale connection is closed and d d = 0") {
  std::mt19937_64 rng(43);
  const int n = 5;
  const auto gamma = tk::christoffel_jet<Rational>(tk::random_polynomial_connection(n, 2, rng, true), testing::random_point(n, 8), 2);
  const auto pc = tk::projective_curvature(gamma);
  const ExactTensor p2 = tk::p_form(pc, 2, tk::ChernInput::Weyl);
  CHECK_FALSE(p2.is_zero());
  CHECK(tk::exterior_derivative(p2).is_zero());

  const ExactTensor a = tk::one_form_jet<Rational>(tk::random_polynomial_one_form(n, 3, rng), testing::random_point(n, 9), 2);
  const ExactTensor da = tk::exterior_derivative(a);
  CHECK_FALSE(da.is_zero());
  CHECK(tk::exterior_derivative(da).is_zero());
}

TEST_CASE("the omega wedge B tensor has the closed-form top Chern form in n = 9") {
  const int n = 9;
  const int k = 3;
  const auto ob = tk::omega_b(n, k);
  REQUIRE(ob);
  CHECK(tk::weyl_type_violation(ob->A).empty());
  CHECK(ob->trace_power != Rational(0));
  const ExactTensor p = tk::p_form(ob->A, k);
  const Rational expected = Rational(1 << k) / factorial(2 * k) * ob->omega_wedge * ob->trace_power;
  CHECK(p(0, 1, 2, 3, 4, 5).value() == expected);
  CHECK(expected != Rational(0));
}

TEST_CASE("the omega wedge B construction is infeasible for k = 3 below n = 9") {
  CHECK_FALSE(tk::omega_b(8, 3).has_value());
  const auto best = tk::omega_b(8, 3, false);
  REQUIRE(best);
  CHECK(best->trace_power == Rational(0));
  CHECK(tk::p_form(best->A, 3).is_zero());
  // Even k only needs a two-dimensional kernel.
  REQUIRE(tk::omega_b(6, 2));
  CHECK_FALSE(tk::p_form(tk::omega_b(6, 2)->A, 2).is_zero());
}

TEST_CASE("wedge obstruction on small matrices") {
  const std::vector<std::vector<Rational>> full = {{1, 0, 2}, {0, 1, 3}};
  const auto w = tk::wedge_obstruction(full);
  CHECK(w.rank == 2);
  CHECK_FALSE(w.vanishes);
  CHECK(w.all_minors);
  CHECK(w.minors == std::vector<Rational>{1, 3, -2});
  REQUIRE(w.witness_columns.size() == 2);
  CHECK(w.witness_minor != Rational(0));

  const std::vector<std::vector<Rational>> deficient = {{1, 2, 3}, {2, 4, 6}};
  const auto d = tk::wedge_obstruction(deficient);
  CHECK(d.vanishes);
  CHECK(d.rank == 1);
  REQUIRE(d.kernel.size() == 2);
  CHECK((d.kernel[0] != Rational(0) || d.kernel[1] != Rational(0)));
  for (int j = 0; j < 3; ++j) CHECK(d.kernel[0] * deficient[0][static_cast<std::size_t>(j)] + d.kernel[1] * deficient[1][static_cast<std::size_t>(j)] == Rational(0));

  const auto f = tk::wedge_obstruction(std::vector<std::vector<double>>{{1, 0, 2}, {0, 1, 3}});
  CHECK_FALSE(f.vanishes);
  CHECK(f.margin > 0.1);

  CHECK_THROWS_AS(tk::wedge_obstruction(std::vector<std::vector<Rational>>{{1}, {2}}), tk::DimensionMismatch);
}

TEST_CASE("metric symmetry map has the metric in its kernel exactly for metric Weyl tensors") {
  const tk::Builtin b = tk::builtin("s2xs2");
  const auto c = tk::connection_jet<Rational>(b.source, b.chart.sample_points()[0], 1);
  const ExactTensor W = tk::projective_curvature(c.gamma).W;
  REQUIRE_FALSE(W.is_zero());
  const auto m = tk::metric_symmetry_map(W);
  CHECK(m.size() == 10);
  const auto e = tk::wedge_obstruction(m);
  CHECK(e.vanishes);
  CHECK(e.rank == 9);

  const auto g = tk::wedge_obstruction(tk::metric_symmetry_map(tk::random_weyl_tensor(4, 44)));
  CHECK_FALSE(g.vanishes);
}
