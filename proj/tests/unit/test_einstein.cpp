#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tractorkit/einstein.hpp"
#include "tractorkit/generators.hpp"

using tk::Classification;
using tk::ExactTensor;
using tk::LeftInverseStrategy;
using tk::Rational;

TEST_CASE("classification names round trip") {
  for (Classification c : {Classification::EinsteinNonzero, Classification::ProjectivelyRicciFlat, Classification::NotEinstein,
                           Classification::Inconclusive})
    CHECK(tk::parse_classification(tk::classification_name(c)) == c);
  CHECK(std::string(tk::classification_name(Classification::EinsteinNonzero)) == "EINSTEIN_NONZERO");
  CHECK_THROWS_AS(tk::parse_classification("EINSTEIN"), tk::ParseError);
}

TEST_CASE("S2 x S2 is Einstein with G = g / 3") {
  const tk::Builtin b = tk::builtin("s2xs2");
  const auto points = b.chart.sample_points();
  const auto v = tk::verdict<Rational>(b.source, points, LeftInverseStrategy::pseudo_inverse());
  CHECK(v.classification == Classification::EinsteinNonzero);
  CHECK(v.criterion == "all-pass");
  for (const auto& ep : v.points) {
    REQUIRE(ep.evaluated);
    const ExactTensor g = tk::metric_jet<Rational>(b.source, ep.point, 0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(ep.G(i, j).value() == g(i, j).value() / Rational(3));
    CHECK(ep.X.is_zero());
    CHECK(ep.signature == "++++");
    CHECK(ep.gamma != Rational(0));
  }
}

TEST_CASE("the flat connection is projectively Ricci flat") {
  const tk::ChartSpec chart = tk::ChartSpec::cube(3, Rational(-1), Rational(1), 3, 5);
  const auto v = tk::verdict<Rational>(tk::ConnectionSource::flat(3), chart.sample_points(), LeftInverseStrategy::pseudo_inverse());
  CHECK(v.classification == Classification::ProjectivelyRicciFlat);
  CHECK(v.criterion == "G-zero");
}

TEST_CASE("a prescribed generic Weyl tensor gives a non-Einstein connection") {
  const tk::ConnectionSource src = tk::generate_prescribed_weyl(tk::random_weyl_tensor(4, 70));
  const std::vector<tk::Point> points = {testing::random_point(4, 71, Rational(-1, 4), Rational(1, 4)),
                                         testing::random_point(4, 72, Rational(-1, 4), Rational(1, 4))};
  const auto v = tk::verdict<Rational>(src, points, LeftInverseStrategy::pseudo_inverse());
  CHECK(v.classification == Classification::NotEinstein);
  for (const auto& ep : v.points) {
    REQUIRE(ep.evaluated);
    CHECK_FALSE(ep.E_skew.is_zero());
    CHECK(ep.E_skew == ep.cotton_flat);
  }
}

TEST_CASE("G and E do not depend on the connection in the projective class") {
  std::mt19937_64 rng(73);
  for (int n : {3, 4}) {
    CAPTURE(n);
    const auto src = tk::random_polynomial_connection(n, 2, rng);
    const auto u = tk::random_polynomial_one_form(n, 2, rng);
    const tk::Point p = testing::random_point(n, 74);
    const auto c = tk::connection_jet<Rational>(src, p, 4);
    const auto ch = tk::projective_shift(c, tk::one_form_jet<Rational>(u, p, 4));
    const auto s = LeftInverseStrategy::pseudo_inverse();
    const auto a = tk::analyze_point(c, p, s);
    const auto b = tk::analyze_point(ch, p, s);
    REQUIRE(a.evaluated);
    REQUIRE(b.evaluated);
    CHECK((a.G - b.G).is_zero());
    CHECK((a.E - b.E).is_zero());
    CHECK(a.gamma == b.gamma);
    CHECK(a.E_skew == a.cotton_flat);
  }
}

TEST_CASE("gamma density of a diagonal G") {
  ExactTensor G = ExactTensor::of(3, "dd");
  G(0, 0) = tk::ExactJet(Rational(1));
  G(1, 1) = tk::ExactJet(Rational(2));
  G(2, 2) = tk::ExactJet(Rational(-3));
  CHECK(tk::gamma_density(G).value() == Rational(-1));
}

TEST_CASE("both left inverses recover Upsilon when C lies in the image of W") {
  const ExactTensor W = tk::random_weyl_tensor(4, 76);
  ExactTensor ups = ExactTensor::of(4, "d");
  ups(0) = tk::ExactJet(Rational(2));
  ups(1) = tk::ExactJet(Rational(-1, 3));
  ups(3) = tk::ExactJet(Rational(5));
  // C_cab = W_ab^d_c Upsilon_d
  const ExactTensor C = tk::permute(tk::contract_product(W, ups, {{2, 0}}), {2, 0, 1});
  const auto natural = LeftInverseStrategy::natural(tk::NaturalQInput::standard(4));
  CHECK(tk::contract_DC(tk::left_inverse(W, LeftInverseStrategy::pseudo_inverse()), C) == ups);
  CHECK(tk::contract_DC(tk::left_inverse(W, natural), C) == ups);
}

TEST_CASE("the standard natural Q degenerates on reflection-symmetric Einstein metrics in n = 4") {
  // Q_t^s is then a multiple of the Pontryagin density, which vanishes here.
  for (const char* name : {"s2xs2", "schwarzschild-u"}) {
    CAPTURE(name);
    const tk::Builtin b = tk::builtin(name);
    const tk::Point p = b.chart.sample_points()[0];
    const auto c = tk::connection_jet<Rational>(b.source, p, 4);
    const auto ep = tk::analyze_point(c, p, LeftInverseStrategy::natural(tk::NaturalQInput::standard(4)));
    CHECK_FALSE(ep.evaluated);
    CHECK(tk::analyze_point(c, p, LeftInverseStrategy::pseudo_inverse()).evaluated);
  }
}
