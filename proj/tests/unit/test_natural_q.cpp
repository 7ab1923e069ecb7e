#include <doctest.h>

#include "support.hpp"
#include "tractorkit/einstein.hpp"
#include "tractorkit/generators.hpp"
#include "tractorkit/natural_q.hpp"

using tk::ExactTensor;
using tk::NaturalQInput;
using tk::Rational;

TEST_CASE("standard inputs are valid and prime correctly") {
  for (int n = 2; n <= 6; ++n) {
    CAPTURE(n);
    const NaturalQInput in = NaturalQInput::standard(n);
    CHECK(tk::natural_q_violation(n, in).empty());
    const NaturalQInput p = in.primed();
    CHECK(p.R == 2);
    CHECK(p.N() == in.N() - 1);
    if (n > 2) CHECK(tk::natural_q_violation(n, p).empty());
  }
  CHECK(NaturalQInput::standard(4).describe() == "R=0 N=(2) F=1111");
  CHECK(NaturalQInput::standard(3).describe() == "R=0 N=(3) F=222111");
}

TEST_CASE("invalid natural Q inputs are reported") {
  NaturalQInput in = NaturalQInput::standard(4);
  in.R = 4;
  CHECK_FALSE(tk::natural_q_violation(4, in).empty());
  in = NaturalQInput::standard(4);
  in.F[0][0] = 2;
  CHECK_FALSE(tk::natural_q_violation(4, in).empty());
  in = NaturalQInput::standard(4);
  in.F[0].pop_back();
  CHECK_FALSE(tk::natural_q_violation(4, in).empty());
  in = NaturalQInput::standard(4);
  in.partition = {3};
  in.F = {std::vector<int>(6, 1)};
  CHECK_FALSE(tk::natural_q_violation(4, in).empty());
  CHECK_THROWS_AS(tk::natural_Q(tk::random_weyl_tensor(4, 1), in), tk::PreconditionViolation);
}

TEST_CASE("Q' W = Q and D W = delta for the standard inputs") {
  for (int n : {3, 4}) {
    CAPTURE(n);
    const ExactTensor W = tk::random_weyl_tensor(n, 60 + static_cast<std::uint64_t>(n));
    const NaturalQInput in = NaturalQInput::standard(n);
    const auto nl = tk::natural_left_inverse(W, in);
    const int K = (2 * in.N()) / n;
    CHECK(nl.Q.weight() == K * (n + 1));
    CHECK(tk::contract_product(nl.Qprime, W, {{0, 0}, {1, 1}, {3, 3}}) == nl.Q);
    CHECK(nl.norm.value() != Rational(0));
    CHECK(tk::left_inverse_residual(nl.D, W).is_zero());

    const auto nf = tk::natural_left_inverse(tk::to_float(W), in);
    CHECK(tk::left_inverse_residual(nf.D, tk::to_float(W)).max_abs() < 1e-9);
  }
}

TEST_CASE("natural left inverse preconditions") {
  const ExactTensor W = tk::random_weyl_tensor(4, 61);
  CHECK_THROWS_AS(tk::natural_left_inverse(W, NaturalQInput::standard(4).primed()), tk::PreconditionViolation);
  CHECK_THROWS_AS(tk::natural_left_inverse(ExactTensor::of(4, "ddud"), NaturalQInput::standard(4)), tk::GenericityFailure);
}
