#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tractorkit/connection.hpp"
#include "tractorkit/einstein.hpp"

namespace tk {

/// A parsed run description (grammar in README.md).
struct Manifest {
  ChartSpec chart;
  ConnectionSource source;
  std::optional<std::string> builtin;  // name, when the connection is a builtin
  std::optional<OneFormField> shift;   // projective change applied to the connection

  bool invariants = false;
  std::vector<int> chern;  // k values
  bool tractor_verify = false;
  std::optional<LeftInverseStrategy> einstein;
  bool conformal_bridge = false;
  bool wedge_obstruction = false;

  std::optional<Ring> ring;  // unset: exact when every expression is rational
  double tol = 1e-8;
  std::string output;  // report path, may be empty
  bool timing = false;

  /// Every key in file order as "section.key" = value, trimmed.
  std::vector<std::pair<std::string, std::string>> echo;

  bool has_metric() const { return source.has_metric(); }
  bool is_rational() const { return source.is_rational() && (!shift || shift->is_rational()); }
  Ring effective_ring() const { return ring.value_or(is_rational() ? Ring::Exact : Ring::Float); }
  /// Empty when the manifest is consistent, else the first problem found:
  /// metric-only analyses on a connection source, chern degrees with 2k > n,
  /// exact ring on non-rational input.
  std::string violation() const;
};

/// Throws ParseError with a line number on malformed input.
Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::string& path);

}  // namespace tk
