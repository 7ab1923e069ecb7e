#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tractorkit/tensor.hpp"

namespace tk {

/// A number in a report: exact values are written as "p/q" strings, floats
/// as JSON numbers (shortest round-trip form).
using ReportValue = std::variant<Rational, double>;

/// Component values of a tensor at a point, row-major.
struct TensorRecord {
  std::vector<std::string> slots;  // e.g. "d4", "u5": variance and extent
  int weight = 0;
  std::vector<ReportValue> values;

  friend bool operator==(const TensorRecord&, const TensorRecord&) = default;
};

/// Results of one analysis at one point.
struct ReportSection {
  std::map<std::string, TensorRecord> tensors;
  std::map<std::string, ReportValue> scalars;
  std::map<std::string, std::vector<ReportValue>> lists;
  std::map<std::string, long long> integers;
  std::map<std::string, bool> flags;
  std::map<std::string, std::string> notes;

  friend bool operator==(const ReportSection&, const ReportSection&) = default;
};

struct PointReport {
  int index = 0;
  std::vector<Rational> coordinates;
  std::map<std::string, ReportSection> sections;  // invariants, chern, tractor, einstein, conformal, wedge

  friend bool operator==(const PointReport&, const PointReport&) = default;
};

struct VerdictRecord {
  std::string classification;
  std::string criterion;
  std::string reason;
  std::string strategy;

  friend bool operator==(const VerdictRecord&, const VerdictRecord&) = default;
};

struct Report {
  int format = 1;
  std::vector<std::pair<std::string, std::string>> manifest;  // echo, file order
  std::string connection;  // description of the source
  std::string ring;        // "exact" or "float"
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<PointReport> points;
  std::optional<VerdictRecord> verdict;
  std::vector<std::string> diagnostics;
  std::map<std::string, double> timing;  // seconds; only with --timing

  friend bool operator==(const Report&, const Report&) = default;
};

template <class T>
ReportValue report_value(const T& v) {
  if constexpr (RingTraits<T>::exact)
    return v;
  else
    return static_cast<double>(v);
}

/// Base-point values of a tensor.
template <class T>
TensorRecord tensor_record(const Tensor<T>& t);

std::string value_text(const ReportValue& v);
double value_double(const ReportValue& v);

/// Pretty-printed JSON with two-space indentation and a trailing newline.
std::string serialize_report(const Report& r);
/// Throws ParseError on malformed or incomplete JSON.
Report parse_report(const std::string& text);
Report load_report(const std::string& path);

/// Human-readable summary: verdict, the test that decided it, and the
/// obstruction magnitudes per point.
std::string explain_report(const Report& r);

}  // namespace tk
