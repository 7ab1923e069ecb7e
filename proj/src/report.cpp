#include "tractorkit/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace tk {

using json = nlohmann::ordered_json;

namespace {

json value_json(const ReportValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->to_string();
  return std::get<double>(v);
}

ReportValue value_from(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw ParseError("report: expected a \"p/q\" string or a number");
}

std::string slot_text(const Slot& s) { return (s.variance == Variance::Up ? "u" : "d") + std::to_string(s.extent); }

json section_json(const ReportSection& s) {
  json o = json::object();
  if (!s.tensors.empty()) {
    json t = json::object();
    for (const auto& [name, rec] : s.tensors) {
      json vals = json::array();
      for (const auto& v : rec.values) vals.push_back(value_json(v));
      t[name] = {{"slots", rec.slots}, {"weight", rec.weight}, {"values", std::move(vals)}};
    }
    o["tensors"] = std::move(t);
  }
  if (!s.scalars.empty()) {
    json t = json::object();
    for (const auto& [name, v] : s.scalars) t[name] = value_json(v);
    o["scalars"] = std::move(t);
  }
  if (!s.lists.empty()) {
    json t = json::object();
    for (const auto& [name, vs] : s.lists) {
      json a = json::array();
      for (const auto& v : vs) a.push_back(value_json(v));
      t[name] = std::move(a);
    }
    o["lists"] = std::move(t);
  }
  if (!s.integers.empty()) o["integers"] = s.integers;
  if (!s.flags.empty()) o["flags"] = s.flags;
  if (!s.notes.empty()) o["notes"] = s.notes;
  return o;
}

ReportSection section_from(const json& o) {
  ReportSection s;
  if (o.contains("tensors"))
    for (const auto& [name, t] : o.at("tensors").items()) {
      TensorRecord rec;
      rec.slots = t.at("slots").get<std::vector<std::string>>();
      rec.weight = t.at("weight").get<int>();
      for (const auto& v : t.at("values")) rec.values.push_back(value_from(v));
      s.tensors[name] = std::move(rec);
    }
  if (o.contains("scalars"))
    for (const auto& [name, v] : o.at("scalars").items()) s.scalars[name] = value_from(v);
  if (o.contains("lists"))
    for (const auto& [name, a] : o.at("lists").items()) {
      auto& dst = s.lists[name];
      for (const auto& v : a) dst.push_back(value_from(v));
    }
  if (o.contains("integers")) s.integers = o.at("integers").get<std::map<std::string, long long>>();
  if (o.contains("flags")) s.flags = o.at("flags").get<std::map<std::string, bool>>();
  if (o.contains("notes")) s.notes = o.at("notes").get<std::map<std::string, std::string>>();
  return s;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

const char* criterion_text(const std::string& key) {
  if (key == "genericity") return "the Weyl tensor is not weakly generic at a sample point, so the detector does not apply there";
  if (key == "left-inverse") return "no left inverse D with D.W = delta could be formed at a sample point";
  if (key == "G-zero") return "G_ij = 0: the class contains a connection with vanishing Schouten tensor";
  if (key == "cotton-flat") return "2E_[ij]k != 0: no Cotton-flat connection lies in the projective class";
  if (key == "G-skew") return "G_[ij] != 0: the candidate Schouten tensor is not symmetric, so it is not a metric";
  if (key == "E") return "E_ijk != 0: the distinguished connection does not preserve G";
  if (key == "gamma") return "gamma = 0: G_ij is degenerate and defines no metric";
  if (key == "all-pass") return "E = 0 and gamma != 0: G_ij is a constant multiple of an Einstein metric in the class";
  return "unknown criterion";
}

}  // namespace

template <class T>
TensorRecord tensor_record(const Tensor<T>& t) {
  TensorRecord rec;
  for (const Slot& s : t.slots()) rec.slots.push_back(slot_text(s));
  rec.weight = t.weight();
  rec.values.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) rec.values.push_back(report_value(t[i].value()));
  return rec;
}

template TensorRecord tensor_record(const Tensor<Rational>&);
template TensorRecord tensor_record(const Tensor<double>&);

std::string value_text(const ReportValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->to_string();
  std::ostringstream os;
  os << std::setprecision(6) << std::get<double>(v);
  return os.str();
}

double value_double(const ReportValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->to_double();
  return std::get<double>(v);
}

std::string serialize_report(const Report& r) {
  json j;
  j["format"] = r.format;
  json m = json::array();
  for (const auto& [k, v] : r.manifest) m.push_back({k, v});
  j["manifest"] = std::move(m);
  j["connection"] = r.connection;
  j["ring"] = r.ring;
  j["seed"] = hex(r.seed);
  j["tolerance"] = r.tolerance;
  json pts = json::array();
  for (const auto& p : r.points) {
    json pj;
    pj["index"] = p.index;
    json coords = json::array();
    for (const auto& c : p.coordinates) coords.push_back(c.to_string());
    pj["coordinates"] = std::move(coords);
    json secs = json::object();
    for (const auto& [name, s] : p.sections) secs[name] = section_json(s);
    pj["sections"] = std::move(secs);
    pts.push_back(std::move(pj));
  }
  j["points"] = std::move(pts);
  if (r.verdict) {
    j["verdict"] = {{"classification", r.verdict->classification},
                    {"criterion", r.verdict->criterion},
                    {"reason", r.verdict->reason},
                    {"strategy", r.verdict->strategy}};
  }
  j["diagnostics"] = r.diagnostics;
  if (!r.timing.empty()) j["timing"] = r.timing;
  return j.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.format = j.at("format").get<int>();
    for (const auto& kv : j.at("manifest")) r.manifest.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    r.connection = j.at("connection").get<std::string>();
    r.ring = j.at("ring").get<std::string>();
    r.seed = std::stoull(j.at("seed").get<std::string>(), nullptr, 0);
    r.tolerance = j.at("tolerance").get<double>();
    for (const auto& pj : j.at("points")) {
      PointReport p;
      p.index = pj.at("index").get<int>();
      for (const auto& c : pj.at("coordinates")) p.coordinates.push_back(Rational::parse(c.get<std::string>()));
      for (const auto& [name, s] : pj.at("sections").items()) p.sections[name] = section_from(s);
      r.points.push_back(std::move(p));
    }
    if (j.contains("verdict")) {
      const auto& v = j.at("verdict");
      r.verdict = VerdictRecord{v.at("classification").get<std::string>(), v.at("criterion").get<std::string>(),
                                v.at("reason").get<std::string>(), v.at("strategy").get<std::string>()};
    }
    r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    if (j.contains("timing")) r.timing = j.at("timing").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("report: bad seed ") + e.what());
  }
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read report " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_report(os.str());
}

std::string explain_report(const Report& r) {
  std::ostringstream os;
  os << "connection: " << r.connection << "\n";
  os << "ring " << r.ring << ", " << r.points.size() << " sample points, seed " << hex(r.seed) << ", tol " << r.tolerance
     << "\n";
  if (r.verdict) {
    os << "\nverdict: " << r.verdict->classification << "\n";
    os << "decided by: " << criterion_text(r.verdict->criterion) << "\n";
    os << "detail: " << r.verdict->reason << "\n";
    os << "left inverse: " << r.verdict->strategy << "\n";
  } else {
    os << "\nno einstein-check was requested\n";
  }
  for (const auto& p : r.points) {
    os << "\npoint " << p.index << " (";
    for (std::size_t i = 0; i < p.coordinates.size(); ++i) os << (i ? ", " : "") << p.coordinates[i].to_string();
    os << ")\n";
    for (const auto& [name, s] : p.sections) {
      os << "  " << name << ":";
      for (const auto& [k, v] : s.flags) os << " " << k << "=" << (v ? "yes" : "no");
      for (const auto& [k, v] : s.integers) os << " " << k << "=" << v;
      for (const auto& [k, v] : s.scalars) os << " " << k << "=" << value_text(v);
      os << "\n";
      for (const auto& [k, v] : s.notes) os << "    " << k << ": " << v << "\n";
    }
  }
  for (const auto& d : r.diagnostics) os << "note: " << d << "\n";
  if (!r.timing.empty()) {
    os << "\ntiming (s):";
    for (const auto& [k, v] : r.timing) os << " " << k << "=" << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace tk
