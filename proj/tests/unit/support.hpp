#pragma once

#include <random>
#include <vector>

#include "tractorkit/connection.hpp"

namespace testing {

using tk::Rational;

inline tk::Point point(std::initializer_list<Rational> xs) { return tk::Point(xs); }

/// One seeded point with coordinates of denominator 16 in the cube [lo, hi]^n.
inline tk::Point random_point(int n, std::uint64_t seed, Rational lo = Rational(-1, 2), Rational hi = Rational(1, 2)) {
  return tk::random_points(std::vector<std::pair<Rational, Rational>>(static_cast<std::size_t>(n), {lo, hi}), 1, seed)[0];
}

inline std::vector<tk::Jet<Rational>> coords(const tk::Point& p, int order) { return tk::coordinate_jets<Rational>(p, order); }

}  // namespace testing
