#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tractorkit/expr.hpp"
#include "tractorkit/tensor.hpp"

namespace tk {

using Point = std::vector<Rational>;

inline constexpr std::uint64_t kDefaultSeed = 0x5eed0f7a3c1d2b4bULL;
inline constexpr int kDefaultPointCount = 5;

/// Coordinate chart: dimension, per-axis box and the sample points.
struct ChartSpec {
  int dim = 0;
  std::vector<std::pair<Rational, Rational>> box;
  std::vector<Point> points;  // explicit points, used before the random ones
  int random_count = kDefaultPointCount;
  std::uint64_t seed = kDefaultSeed;

  static ChartSpec cube(int dim, Rational lo, Rational hi, int random_count = kDefaultPointCount,
                        std::uint64_t seed = kDefaultSeed);

  bool contains(const Point& p) const;
  /// Explicit points followed by random_count seeded points. Throws
  /// DimensionMismatch for explicit points outside the box.
  std::vector<Point> sample_points() const;
};

/// Deterministic points in the box with coordinates of denominator 16,
/// drawn from the raw output of a 64-bit Mersenne twister.
std::vector<Point> random_points(const std::vector<std::pair<Rational, Rational>>& box, int count, std::uint64_t seed);

/// Torsion-free connection given by Christoffel symbols, or by a metric
/// whose Levi-Civita connection is meant.
struct ConnectionSource {
  enum class Kind { Christoffel, Metric };

  Kind kind = Kind::Christoffel;
  int dim = 0;
  std::string name;
  std::vector<Expr> gamma;   // n^3 entries, (i*n + j)*n + k holds Gamma^i_{jk}
  std::vector<Expr> metric;  // n^2 entries, i*n + j holds g_{ij}

  static ConnectionSource flat(int dim);
  static ConnectionSource christoffel(int dim, std::vector<Expr> gamma, std::string name = {});
  static ConnectionSource from_metric(int dim, std::vector<Expr> metric, std::string name = {});

  bool is_rational() const;
  bool has_metric() const { return kind == Kind::Metric; }
};

/// A one-form Upsilon_i given by n expressions.
struct OneFormField {
  std::vector<Expr> components;

  static OneFormField zero(int dim);
  bool is_rational() const;
};

/// A connection at a point, together with the connection it induces on the
/// density line E(1): nabla_a sigma = d_a sigma + theta_a sigma / (n + 1) for
/// sigma of weight 1, in the density trivialization the jets refer to.
template <class T>
struct ConnectionJet {
  Tensor<T> gamma;  // Gamma^i_{jk}, slots (Up, Down, Down)
  Tensor<T> theta;  // slot (Down)
  std::optional<Tensor<T>> metric;  // g_{ij} one jet order above gamma, when the source is a metric

  int dim() const { return gamma.dim(); }
  int order() const { return gamma.min_order(); }
};

/// Coordinate jets x_1..x_n of the given order about p.
template <class T>
std::vector<Jet<T>> coordinate_jets(const Point& p, int order);

/// Gamma^i_{jk} and its partials to the requested order. Exact when the
/// source is rational and T is Rational. Metric sources are differentiated
/// once more than requested. Throws EvaluationSingularity on a pole at p and
/// PreconditionViolation when Gamma is not symmetric in its lower indices.
template <class T>
Tensor<T> christoffel_jet(const ConnectionSource& src, const Point& p, int order);

/// Gamma together with its density connection. Christoffel sources use the
/// coordinate volume (theta_a = Gamma^c_{ac}); metric sources use the metric
/// volume, which the Levi-Civita connection preserves (theta = 0).
template <class T>
ConnectionJet<T> connection_jet(const ConnectionSource& src, const Point& p, int order);

/// g_{ij} as jets of the given order.
template <class T>
Tensor<T> metric_jet(const ConnectionSource& src, const Point& p, int order);

/// Inverse metric g^{ij}; throws PreconditionViolation if g is degenerate at p.
template <class T>
Tensor<T> inverse_metric(const Tensor<T>& g);

/// Levi-Civita connection of g_{ij}: 1/2 g^{il}(d_j g_{lk} + d_k g_{lj} - d_l g_{jk}).
/// The result has one jet order less than g.
template <class T>
Tensor<T> levi_civita(const Tensor<T>& g);
template <class T>
Tensor<T> levi_civita(const ConnectionSource& src, const Point& p, int order);

template <class T>
Tensor<T> one_form_jet(const OneFormField& u, const Point& p, int order);

/// Gamma^i_{jk} + Upsilon_j delta^i_k + Upsilon_k delta^i_j.
template <class T>
Tensor<T> projective_shift(const Tensor<T>& gamma, const Tensor<T>& upsilon);
/// Shifts Gamma and the density connection (theta + (n + 1) Upsilon); the
/// metric is dropped because it no longer matches the connection.
template <class T>
ConnectionJet<T> projective_shift(const ConnectionJet<T>& c, const Tensor<T>& upsilon);

/// Named example connections.
struct Builtin {
  std::string name;
  std::string description;
  ConnectionSource source;
  ChartSpec chart;
  /// Einstein constant lambda with Ric = (n - 1) lambda g, when Einstein.
  std::optional<Rational> einstein_lambda;
  bool float_only = false;
};

/// Builtins that depend on the dimension (flat, sphere, hyperbolic) take it
/// from dim; the others ignore it. Throws ParseError on an unknown name.
Builtin builtin(const std::string& name, int dim = 4);
std::vector<std::string> builtin_names();

}  // namespace tk
