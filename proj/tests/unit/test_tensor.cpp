#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tractorkit/tensor.hpp"

using tk::ExactJet;
using tk::ExactTensor;
using tk::Rational;

namespace {

ExactTensor random_tensor(int n, std::string_view slots, std::mt19937_64& rng) {
  ExactTensor t = ExactTensor::of(n, slots);
  std::uniform_int_distribution<long> d(-4, 4);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = ExactJet(Rational(d(rng)));
  return t;
}

}  // namespace

TEST_CASE("symmetric against antisymmetric contracts to zero") {
  std::mt19937_64 rng(1);
  const ExactTensor a = random_tensor(4, "uu", rng);
  const ExactTensor b = random_tensor(4, "dd", rng);
  const ExactTensor s = tk::symmetrize(a, {0, 1});
  const ExactTensor w = tk::alternate(b, {0, 1});
  CHECK(tk::contract_product(s, w, {{0, 0}, {1, 1}}).is_zero());
}

TEST_CASE("alternation and symmetrization are projections") {
  std::mt19937_64 rng(2);
  const ExactTensor t = random_tensor(3, "ddd", rng);
  const ExactTensor a = tk::alternate(t, {0, 1, 2});
  CHECK(tk::alternate(a, {0, 1, 2}) == a);
  CHECK(tk::symmetrize(a, {0, 2}).is_zero());
  const ExactTensor s = tk::symmetrize(t, {0, 1});
  CHECK(tk::symmetrize(s, {0, 1}) == s);
  CHECK(tk::permute(s, {1, 0, 2}) == s);
}

TEST_CASE("contract_product equals contraction of the outer product") {
  std::mt19937_64 rng(3);
  const ExactTensor a = random_tensor(3, "udd", rng);
  const ExactTensor b = random_tensor(3, "uu", rng);
  const ExactTensor direct = tk::contract_product(a, b, {{1, 0}});
  const ExactTensor outer = tk::contract(tk::tensor_product(a, b), 3, 1);
  CHECK(direct == outer);
}

TEST_CASE("permute moves slots as documented") {
  std::mt19937_64 rng(4);
  const ExactTensor t = random_tensor(3, "udd", rng);
  const ExactTensor p = tk::permute(t, {2, 0, 1});
  CHECK(p.slot(0).variance == tk::Variance::Down);
  CHECK(p.slot(1).variance == tk::Variance::Up);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(p(i, j, k) == t(j, k, i));
}

TEST_CASE("epsilon and the Hodge dual") {
  const int n = 4;
  const ExactTensor e = tk::epsilon<Rational>(n, tk::Variance::Down);
  CHECK(e(0, 1, 2, 3).value() == Rational(1));
  CHECK(e(1, 0, 2, 3).value() == Rational(-1));
  CHECK(e(0, 0, 2, 3).is_zero());
  CHECK(e.weight() == -(n + 1));
  std::mt19937_64 rng(5);
  const ExactTensor w = tk::alternate(random_tensor(n, "dd", rng), {0, 1});
  const ExactTensor star = tk::hodge_dual(w);  // (u, u)
  // Lower with eps_{..} and dualise again: ** = (-1)^{k(n-k)} = 1 for k = 2, n = 4.
  ExactTensor lowered = tk::contract_product(star, e, {{0, 2}, {1, 3}});
  lowered *= Rational(1, 2);
  CHECK(lowered == w);
}

TEST_CASE("symmetry stamps are checked") {
  std::mt19937_64 rng(6);
  ExactTensor t = random_tensor(3, "dd", rng);
  t(0, 1) = ExactJet(Rational(1));
  t(1, 0) = ExactJet(Rational(2));
  CHECK_THROWS_AS(t.stamp({tk::Symmetry::Symmetric, 0, 1}), tk::PreconditionViolation);
  ExactTensor s = tk::symmetrize(t, {0, 1});
  CHECK_NOTHROW(s.stamp({tk::Symmetry::Symmetric, 0, 1}));
}

TEST_CASE("partial derivative puts the new slot first") {
  const tk::Point p = testing::point({Rational(1), Rational(2)});
  const auto x = testing::coords(p, 2);
  ExactTensor v = ExactTensor::of(2, "u");
  v(0) = x[0] * x[1];
  v(1) = x[1] * x[1];
  const ExactTensor dv = tk::partial_derivative(v);
  CHECK(dv.slot(0).variance == tk::Variance::Down);
  CHECK(dv(0, 0).value() == Rational(2));  // d_1 (x1 x2)
  CHECK(dv(1, 0).value() == Rational(1));  // d_2 (x1 x2)
  CHECK(dv(1, 1).value() == Rational(4));  // d_2 x2^2
  CHECK(dv.min_order() == 1);
}

TEST_CASE("mismatched shapes are rejected") {
  const ExactTensor a = ExactTensor::of(3, "ud");
  const ExactTensor b = ExactTensor::of(3, "dd");
  CHECK_THROWS_AS(a + b, tk::DimensionMismatch);
  CHECK_THROWS_AS(tk::contract_product(a, b, {{1, 0}}), tk::DimensionMismatch);
}
