#include "tractorkit/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace tk {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

[[noreturn]] void fail(const Entry& e, const std::string& what) {
  throw ParseError("manifest line " + std::to_string(e.line) + " (" + e.section + "." + e.key + "): " + what);
}

bool parse_bool(const Entry& e) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "yes" || v == "true" || v == "on" || v == "1") return true;
  if (v == "no" || v == "false" || v == "off" || v == "0") return false;
  fail(e, "expected yes or no, got '" + e.value + "'");
}

Rational parse_rational(const Entry& e, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error&) {
    fail(e, "not a rational number: '" + text + "'");
  }
}

long parse_int(const Entry& e, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used, 10);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(e, "not an integer: '" + text + "'");
  }
}

std::pair<Rational, Rational> parse_interval(const Entry& e, const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) fail(e, "intervals are written lo..hi");
  const Rational lo = parse_rational(e, trim(text.substr(0, dots)));
  const Rational hi = parse_rational(e, trim(text.substr(dots + 2)));
  if (hi < lo) fail(e, "empty interval " + text);
  return {lo, hi};
}

Expr parse_expr(const Entry& e, int dim) {
  try {
    return Expr::parse(e.value, dim);
  } catch (const ParseError& err) {
    fail(e, err.what());
  }
}

std::vector<int> parse_indices(const Entry& e, const std::string& text, int count, int dim) {
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != count) fail(e, "expected " + std::to_string(count) + " indices");
  std::vector<int> out;
  for (const auto& p : parts) {
    const long v = parse_int(e, p);
    if (v < 1 || v > dim) fail(e, "index " + p + " outside 1.." + std::to_string(dim));
    out.push_back(static_cast<int>(v - 1));
  }
  return out;
}

NaturalQInput parse_q(const Entry* partition, const Entry* groups, int n) {
  if (!partition && !groups) return NaturalQInput::standard(n);
  if (!partition || !groups) fail(partition ? *partition : *groups, "q-partition and q-groups go together");
  NaturalQInput in;
  for (const auto& p : split(partition->value, ',')) in.partition.push_back(static_cast<int>(parse_int(*partition, p)));
  for (const auto& chain : split(groups->value, '|')) {
    std::vector<int> f;
    for (char c : chain) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (!std::isdigit(static_cast<unsigned char>(c))) fail(*groups, "group labels are single digits");
      f.push_back(c - '0');
    }
    in.F.push_back(std::move(f));
  }
  if (const std::string why = natural_q_violation(n, in); !why.empty()) fail(*groups, why);
  return in;
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"chart", {"dimension", "box", "point", "count", "seed"}},
      {"connection", {"builtin", "kind"}},
      {"analyses",
       {"invariants", "chern", "tractor-verify", "einstein-check", "q-partition", "q-groups", "conformal-bridge",
        "wedge-obstruction"}},
      {"tolerances", {"tol", "ring"}},
      {"output", {"path", "timing"}},
  };
  return keys;
}

}  // namespace

std::string Manifest::violation() const {
  const int n = source.dim;
  if (conformal_bridge && !has_metric()) return "conformal-bridge needs a metric source (metric[i,j] entries or a metric builtin)";
  if (conformal_bridge && n < 3) return "conformal-bridge needs dimension at least 3";
  for (int k : chern)
    if (k < 1 || 2 * k > n) return "chern degree " + std::to_string(k) + " needs 1 <= k and 2k <= " + std::to_string(n);
  if (ring == Ring::Exact && !is_rational()) return "the exact ring needs rational expressions (no sin, cos, exp, log, sqrt)";
  if (einstein && einstein->kind == LeftInverseStrategy::Kind::NaturalQ) {
    if (const std::string why = natural_q_violation(n, einstein->q); !why.empty()) return "natural-q inputs: " + why;
  }
  return {};
}

Manifest parse_manifest(std::string_view text) {
  std::vector<Entry> entries;
  {
    std::string section;
    std::istringstream is{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[' && s.back() == ']') {
        section = trim(s.substr(1, s.size() - 2));
        if (!known_keys().contains(section))
          throw ParseError("manifest line " + std::to_string(line) + ": unknown section [" + section + "]");
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError("manifest line " + std::to_string(line) + ": expected key = value");
      if (section.empty()) throw ParseError("manifest line " + std::to_string(line) + ": key outside any section");
      Entry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
      if (e.value.empty()) fail(e, "empty value");
      entries.push_back(std::move(e));
    }
  }

  static const std::regex indexed(R"((gamma|metric|shift)\[([0-9,\s]+)\])");
  Manifest m;
  const Entry* dim_entry = nullptr;
  const Entry* builtin_entry = nullptr;
  const Entry* kind_entry = nullptr;
  const Entry* box_entry = nullptr;
  const Entry* q_partition = nullptr;
  const Entry* q_groups = nullptr;
  const Entry* einstein_entry = nullptr;
  std::vector<const Entry*> points, gammas, metrics, shifts;
  std::optional<int> count;
  std::optional<std::uint64_t> seed;

  for (const Entry& e : entries) {
    m.echo.emplace_back(e.section + "." + e.key, e.value);
    std::smatch match;
    if (e.section == "connection" && std::regex_match(e.key, match, indexed)) {
      const std::string which = match[1];
      (which == "gamma" ? gammas : which == "metric" ? metrics : shifts).push_back(&e);
      continue;
    }
    const auto& allowed = known_keys().at(e.section);
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) fail(e, "unknown key");
    if (e.section == "chart") {
      if (e.key == "dimension") dim_entry = &e;
      else if (e.key == "box") box_entry = &e;
      else if (e.key == "point") points.push_back(&e);
      else if (e.key == "count") {
        const long c = parse_int(e, e.value);
        if (c < 0 || c > 1000) fail(e, "count must lie in 0..1000");
        count = static_cast<int>(c);
      } else if (e.key == "seed") {
        try {
          std::size_t used = 0;
          seed = std::stoull(e.value, &used, 0);
          if (used != e.value.size()) throw std::invalid_argument(e.value);
        } catch (const std::exception&) {
          fail(e, "seed must be a decimal or 0x-prefixed 64-bit integer");
        }
      }
    } else if (e.section == "connection") {
      if (e.key == "builtin") builtin_entry = &e;
      else kind_entry = &e;
    } else if (e.section == "analyses") {
      if (e.key == "invariants") m.invariants = parse_bool(e);
      else if (e.key == "chern") {
        for (const auto& k : split(e.value, ',')) m.chern.push_back(static_cast<int>(parse_int(e, k)));
      } else if (e.key == "tractor-verify") m.tractor_verify = parse_bool(e);
      else if (e.key == "einstein-check") einstein_entry = &e;
      else if (e.key == "q-partition") q_partition = &e;
      else if (e.key == "q-groups") q_groups = &e;
      else if (e.key == "conformal-bridge") m.conformal_bridge = parse_bool(e);
      else if (e.key == "wedge-obstruction") m.wedge_obstruction = parse_bool(e);
    } else if (e.section == "tolerances") {
      if (e.key == "tol") {
        try {
          m.tol = std::stod(e.value);
        } catch (const std::exception&) {
          fail(e, "not a number");
        }
        if (!(m.tol > 0.0)) fail(e, "tol must be positive");
      } else {
        if (e.value == "exact") m.ring = Ring::Exact;
        else if (e.value == "float") m.ring = Ring::Float;
        else fail(e, "ring is exact or float");
      }
    } else if (e.section == "output") {
      if (e.key == "path") m.output = e.value;
      else m.timing = parse_bool(e);
    }
  }

  std::optional<int> dim;
  if (dim_entry) {
    const long d = parse_int(*dim_entry, dim_entry->value);
    if (d < 2 || d > 9) fail(*dim_entry, "dimension must lie in 2..9");
    dim = static_cast<int>(d);
  }

  if (builtin_entry) {
    if (kind_entry || !gammas.empty() || !metrics.empty()) fail(*builtin_entry, "a builtin cannot be combined with kind, gamma or metric entries");
    Builtin b;
    try {
      b = builtin(builtin_entry->value, dim.value_or(4));
    } catch (const ParseError& err) {
      fail(*builtin_entry, err.what());
    }
    if (dim && b.source.dim != *dim)
      fail(*dim_entry, "builtin " + b.name + " has dimension " + std::to_string(b.source.dim));
    m.builtin = b.name;
    m.source = b.source;
    m.chart = b.chart;
  } else {
    if (!dim) throw ParseError("manifest: [chart] dimension is required unless the connection is a builtin");
    const int n = *dim;
    std::string kind = kind_entry ? kind_entry->value : (metrics.empty() ? "christoffel" : "metric");
    if (kind != "christoffel" && kind != "metric") fail(*kind_entry, "kind is christoffel or metric");
    if (kind == "christoffel" && !metrics.empty()) fail(*metrics.front(), "metric entries need kind = metric");
    if (kind == "metric" && !gammas.empty()) fail(*gammas.front(), "gamma entries need kind = christoffel");
    if (kind == "metric" && metrics.empty())
      throw ParseError("manifest: kind = metric needs metric[i,j] entries");
    const std::size_t rank = kind == "christoffel" ? 3 : 2;
    std::size_t total = 1;
    for (std::size_t r = 0; r < rank; ++r) total *= static_cast<std::size_t>(n);
    std::vector<Expr> table(total, Expr::constant(Rational(0)));
    std::vector<bool> given(total, false);
    auto flat = [&](const std::vector<int>& idx) {
      std::size_t f = 0;
      for (int i : idx) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
      return f;
    };
    for (const Entry* e : kind == "christoffel" ? gammas : metrics) {
      std::smatch match;
      std::regex_match(e->key, match, indexed);
      std::vector<int> idx = parse_indices(*e, match[2], static_cast<int>(rank), n);
      const std::size_t f = flat(idx);
      if (given[f]) fail(*e, "entry given twice");
      table[f] = parse_expr(*e, n);
      given[f] = true;
    }
    // Fill the mirror of every entry whose mirror was not written out.
    for (std::size_t f = 0; f < total; ++f) {
      if (!given[f]) continue;
      std::vector<int> idx(rank);
      std::size_t r = f;
      for (std::size_t s = rank; s-- > 0;) {
        idx[s] = static_cast<int>(r % static_cast<std::size_t>(n));
        r /= static_cast<std::size_t>(n);
      }
      std::swap(idx[rank - 2], idx[rank - 1]);
      const std::size_t g = flat(idx);
      if (!given[g]) table[g] = table[f];
    }
    m.source = kind == "christoffel" ? ConnectionSource::christoffel(n, std::move(table), "manifest")
                                     : ConnectionSource::from_metric(n, std::move(table), "manifest");
    m.chart = ChartSpec::cube(n, Rational(-1), Rational(1));
  }
  const int n = m.source.dim;

  if (box_entry) {
    const auto parts = split(box_entry->value, ',');
    if (parts.size() == 1) {
      m.chart.box.assign(static_cast<std::size_t>(n), parse_interval(*box_entry, parts[0]));
    } else if (static_cast<int>(parts.size()) == n) {
      m.chart.box.clear();
      for (const auto& p : parts) m.chart.box.push_back(parse_interval(*box_entry, p));
    } else {
      fail(*box_entry, "give one interval or one per axis");
    }
  }
  m.chart.dim = n;
  if (count) m.chart.random_count = *count;
  if (seed) m.chart.seed = *seed;
  for (const Entry* e : points) {
    Point p;
    for (const auto& c : split(e->value, ',')) p.push_back(parse_rational(*e, c));
    if (static_cast<int>(p.size()) != n) fail(*e, "point needs " + std::to_string(n) + " coordinates");
    if (!m.chart.contains(p)) fail(*e, "point outside the chart box");
    m.chart.points.push_back(std::move(p));
  }

  if (!shifts.empty()) {
    OneFormField u = OneFormField::zero(n);
    std::vector<bool> given(static_cast<std::size_t>(n), false);
    for (const Entry* e : shifts) {
      std::smatch match;
      std::regex_match(e->key, match, indexed);
      const int i = parse_indices(*e, match[2], 1, n)[0];
      if (given[static_cast<std::size_t>(i)]) fail(*e, "entry given twice");
      u.components[static_cast<std::size_t>(i)] = parse_expr(*e, n);
      given[static_cast<std::size_t>(i)] = true;
    }
    m.shift = std::move(u);
  }

  if (einstein_entry) {
    const std::string& v = einstein_entry->value;
    if (v == "pseudo-inverse" || v == "yes") m.einstein = LeftInverseStrategy::pseudo_inverse();
    else if (v == "natural-q") m.einstein = LeftInverseStrategy::natural(parse_q(q_partition, q_groups, n));
    else if (v != "no") fail(*einstein_entry, "einstein-check is pseudo-inverse, natural-q or no");
  }
  if ((q_partition || q_groups) && !(m.einstein && m.einstein->kind == LeftInverseStrategy::Kind::NaturalQ))
    fail(q_partition ? *q_partition : *q_groups, "q inputs need einstein-check = natural-q");

  if (const std::string why = m.violation(); !why.empty()) throw ParseError("manifest: " + why);
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read manifest " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_manifest(os.str());
}

}  // namespace tk
