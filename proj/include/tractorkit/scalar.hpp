#pragma once

#include <cmath>
#include <string>

#include "tractorkit/error.hpp"
#include "tractorkit/rational.hpp"

namespace tk {

/// The two scalar rings every computation is instantiated over.
enum class Ring { Exact, Float };

template <class T>
struct RingTraits;

template <>
struct RingTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Ring ring = Ring::Exact;
  static constexpr const char* name = "exact";

  static Rational from_rational(const Rational& r) { return r; }
  static double to_double(const Rational& r) { return r.to_double(); }
  static bool is_zero(const Rational& r) { return r.is_zero(); }
  static void add_product(Rational& acc, const Rational& a, const Rational& b) { acc.add_product(a, b); }
  static Rational divide(const Rational& a, const Rational& b) { return a / b; }
};

template <>
struct RingTraits<double> {
  static constexpr bool exact = false;
  static constexpr Ring ring = Ring::Float;
  static constexpr const char* name = "float";

  static double from_rational(const Rational& r) { return r.to_double(); }
  static double to_double(double d) { return d; }
  static bool is_zero(double d) { return d == 0.0; }
  static void add_product(double& acc, double a, double b) { acc += a * b; }
  static double divide(double a, double b) {
    if (b == 0.0) throw EvaluationSingularity("floating division by exact zero");
    return a / b;
  }
};

inline const char* ring_name(Ring r) { return r == Ring::Exact ? "exact" : "float"; }

}  // namespace tk
