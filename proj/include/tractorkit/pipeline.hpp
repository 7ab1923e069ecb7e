#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tractorkit/manifest.hpp"
#include "tractorkit/report.hpp"

namespace tk {

/// Command-line settings that take precedence over the manifest.
struct RunOverrides {
  std::optional<Ring> ring;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  bool timing = false;
};

/// Throws ParseError when the result is inconsistent (e.g. exact ring on
/// non-rational input).
void apply_overrides(Manifest& m, const RunOverrides& o);

/// Runs every requested analysis at every sample point, in point order.
/// EvaluationSingularity propagates when a sample point hits a pole.
Report run_manifest(const Manifest& m);

}  // namespace tk
