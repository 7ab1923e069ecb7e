#include "tractorkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "tractorkit/conformal.hpp"
#include "tractorkit/generators.hpp"
#include "tractorkit/obstructions.hpp"
#include "tractorkit/tractor.hpp"

namespace tk {

void apply_overrides(Manifest& m, const RunOverrides& o) {
  if (o.ring) m.ring = o.ring;
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ParseError("--tol must be positive");
    m.tol = *o.tol;
  }
  if (o.seed) m.chart.seed = *o.seed;
  if (o.output) m.output = *o.output;
  if (o.timing) m.timing = true;
  if (const std::string why = m.violation(); !why.empty()) throw ParseError(why);
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::map<std::string, double>& sink) : sink_(sink) {}
  template <class F>
  auto time(const std::string& key, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Add {
      std::map<std::string, double>& sink;
      const std::string& key;
      std::chrono::steady_clock::time_point start;
      ~Add() { sink[key] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
    } add{sink_, key, start};
    return f();
  }

 private:
  std::map<std::string, double>& sink_;
};

template <class T>
bool zero_within(const Tensor<T>& t, double tol, double scale) {
  if constexpr (RingTraits<T>::exact) {
    (void)tol;
    (void)scale;
    return t.is_zero();
  } else {
    return t.max_abs() <= tol * std::max(1.0, scale);
  }
}

template <class T>
bool zero_within(const Jet<T>& j, double tol, double scale) {
  if constexpr (RingTraits<T>::exact) {
    (void)tol;
    (void)scale;
    return j.is_zero();
  } else {
    return j.max_abs() <= tol * std::max(1.0, scale);
  }
}

template <class T>
ReportValue norm_value(const Tensor<T>& t) {
  return t.values().max_abs();
}

std::string describe_source(const Manifest& m) {
  std::string s;
  if (m.builtin)
    s = "builtin " + *m.builtin;
  else
    s = std::string(m.has_metric() ? "metric" : "christoffel") + " source";
  s += ", n = " + std::to_string(m.source.dim);
  if (m.shift) {
    s += ", shifted by Upsilon = (";
    for (std::size_t i = 0; i < m.shift->components.size(); ++i)
      s += (i ? ", " : "") + m.shift->components[i].text();
    s += ")";
  }
  return s;
}

template <class T>
struct Runner {
  const Manifest& m;
  Report& report;
  Stopwatch watch;
  std::vector<EinsteinPoint<T>> einstein_points;

  Runner(const Manifest& manifest, Report& r) : m(manifest), report(r), watch(r.timing) {}

  int gamma_order() const { return m.einstein ? kMaxChristoffelOrder : 2; }

  ConnectionJet<T> jet_at(const Point& p) {
    ConnectionJet<T> c = connection_jet<T>(m.source, p, gamma_order());
    if (m.shift) c = projective_shift(c, one_form_jet<T>(*m.shift, p, gamma_order()));
    return c;
  }

  ReportSection invariants(const ConnectionJet<T>& c, const ProjectiveCurvature<T>& pc, const Tensor<T>& C) {
    ReportSection s;
    s.tensors["W"] = tensor_record(pc.W.values());
    s.tensors["P"] = tensor_record(pc.P.values());
    s.tensors["beta"] = tensor_record(pc.beta.values());
    s.tensors["C"] = tensor_record(C.values());
    const double kappa = pc.R.values().max_abs();
    s.scalars["curvature_scale"] = kappa;
    s.scalars["W_norm"] = norm_value(pc.W);
    s.scalars["C_norm"] = norm_value(C);
    s.flags["reassembles"] = zero_within((reassemble(pc) - pc.R).values(), m.tol, kappa);
    s.flags["W_zero"] = zero_within(pc.W.values(), m.tol, kappa);
    s.flags["C_zero"] = zero_within(C.values(), m.tol, kappa);
    s.flags["scale_connection"] = scale_report(c, RingTraits<T>::exact ? 0.0 : m.tol).is_scale;
    return s;
  }

  ReportSection chern(const ProjectiveCurvature<T>& pc, const Tensor<T>& Omega) {
    ReportSection s;
    const double kappa = pc.R.values().max_abs();
    const bool scale = zero_within(pc.beta.values(), m.tol, kappa);
    for (int k : m.chern) {
      const std::string name = "p" + std::to_string(k);
      const Tensor<T> Wv = pc.W.values();
      const Tensor<T> pk = p_form(Wv, k);
      const double sk = std::pow(std::max(1.0, kappa), k);
      s.tensors[name] = tensor_record(pk);
      s.scalars[name + "_norm"] = pk.max_abs();
      s.flags[name + "_zero"] = zero_within(pk, m.tol, sk);
      if (scale) {
        const Tensor<T> pr = p_form(pc.R.values(), k);
        s.flags[name + "_from_R_equals_W"] = zero_within(pr - pk, m.tol, sk);
      } else {
        s.notes[name + "_from_R"] = "skipped: beta != 0, not a scale connection";
      }
      const Tensor<T> qk = q_form(Omega.values(), k);
      s.flags["q" + std::to_string(k) + "_equals_" + name] = zero_within(qk - pk, m.tol, sk);
    }
    return s;
  }

  ReportSection tractor(const ConnectionJet<T>& c, const ProjectiveCurvature<T>& pc, const Tensor<T>& Omega) {
    ReportSection s;
    const int n = c.dim();
    const double kappa = pc.R.values().max_abs();
    s.flags["splitting_consistent"] = splitting_is_consistent(tractor_splitting<T>(n));
    const Tensor<T> OX = curvature_on_X(Omega);
    s.scalars["omega_norm"] = norm_value(Omega);
    s.scalars["omega_X_norm"] = norm_value(OX);
    s.flags["omega_X_zero"] = zero_within(OX.values(), m.tol, kappa);
    if (!c.metric) {
      s.notes["submetric"] = m.has_metric() ? "skipped: the shift separates the connection from the metric"
                                            : "skipped: the source has no metric";
      return s;
    }
    const MetricGeometry<T> geom = metric_geometry(*c.metric);
    const auto lambda = einstein_constant(geom, m.tol);
    if (!lambda) {
      s.notes["submetric"] = "skipped: the metric is not Einstein";
      return s;
    }
    const TractorConnection<T> tc = tractor_connection(c);
    const Tensor<T> h = einstein_submetric(tc, *lambda);
    const Tensor<T> dh = submetric_derivative(h, tc);
    const Tensor<T> skew = skew_residual(Omega.values(), h.values());
    s.scalars["lambda"] = report_value(*lambda);
    s.scalars["submetric_derivative_norm"] = norm_value(dh);
    s.scalars["skew_residual_norm"] = norm_value(skew);
    s.flags["submetric_parallel"] = zero_within(dh.values(), m.tol, kappa);
    s.flags["omega_skew"] = zero_within(skew.values(), m.tol, kappa);
    return s;
  }

  ReportSection einstein(const ConnectionJet<T>& c, const Point& p) {
    EinsteinPoint<T> ep = analyze_point(c, p, *m.einstein, m.tol);
    ReportSection s;
    s.flags["weakly_generic"] = ep.genericity.ok;
    s.flags["evaluated"] = ep.evaluated;
    s.integers["weyl_map_rank"] = ep.genericity.rank;
    s.scalars["genericity_margin"] = ep.genericity.margin;
    s.scalars["curvature_scale"] = ep.curvature_scale;
    if (!ep.failure.empty()) s.notes["failure"] = ep.failure;
    if (ep.evaluated) {
      s.tensors["upsilon"] = tensor_record(ep.upsilon.values());
      s.tensors["G"] = tensor_record(ep.G.values());
      s.tensors["E"] = tensor_record(ep.E.values());
      s.scalars["gamma"] = report_value(ep.gamma);
      s.scalars["G_norm"] = ep.G_norm;
      s.scalars["G_skew_norm"] = ep.G_skew_norm;
      s.scalars["E_norm"] = ep.E_norm;
      s.scalars["E_skew_norm"] = ep.E_skew.values().max_abs();
      s.scalars["cotton_flat_norm"] = ep.cotton_flat_norm;
      s.notes["G_signature"] = ep.signature;
    }
    einstein_points.push_back(std::move(ep));
    return s;
  }

  ReportSection conformal(const Point& p, std::size_t index) {
    ReportSection s;
    const int n = m.source.dim;
    const MetricGeometry<T> geom = metric_geometry(metric_jet<T>(m.source, p, 3));
    const ConformalCurvature<T> cc = conformal_decompose(geom);
    const double kappa = cc.R_low.values().max_abs();
    s.scalars["reassembly_residual_norm"] = norm_value(conformal_reassembly_residual(cc, geom.g));
    s.scalars["ricci_residual_norm"] = norm_value(conformal_ricci_residual(cc, geom.g));
    s.scalars["J"] = report_value(cc.J.value());
    const WeylComparison<T> wc = compare_weyl(geom, m.tol);
    s.flags["einstein"] = wc.einstein;
    s.scalars["weyl_residual_norm"] = norm_value(wc.residual);
    s.flags["weyl_agrees"] = zero_within(wc.residual.values(), m.tol, kappa);
    if (n == 4) {
      const Tensor<T> sq = weyl_square_residual(cc, geom);
      s.scalars["weyl_square_residual_norm"] = norm_value(sq);
      s.flags["weyl_square_identity"] = zero_within(sq.values(), m.tol, kappa * kappa);
    }
    if (!wc.einstein) {
      s.notes["bridge"] = "skipped: the metric is not Einstein";
      return s;
    }
    const SchoutenHalving<T> sh = schouten_halving_check(geom, m.tol);
    s.scalars["lambda"] = report_value(sh.lambda);
    s.scalars["schouten_halving_residual_norm"] = norm_value(sh.residual);
    s.flags["schouten_halves"] = zero_within(sh.residual.values(), m.tol, kappa);

    // Random cotractors drawn from the seed and the point index.
    std::mt19937_64 rng(m.chart.seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    auto cotractor = [&]() {
      const OneFormField mu = random_polynomial_one_form(n, 1, rng);
      const Expr sigma = Polynomial::random(n, 1, rng).to_expr();
      const auto x = coordinate_jets<T>(p, 1);
      Tensor<T> sig = Tensor<T>::scalar(n, sigma.evaluate<T>(x));
      return make_cotractor(one_form_jet<T>(mu, p, 1), sig);
    };
    const Tensor<T> U = cotractor();
    const Tensor<T> Up = cotractor();
    const IotaReport<T> io = iota_checks(geom, U, Up, m.tol);
    s.scalars["iota_annihilation"] = report_value(io.annihilation.value());
    s.scalars["iota_connection_norm"] = norm_value(io.connection);
    s.scalars["iota_metric"] = report_value(io.metric.value());
    s.flags["iota_annihilated"] = zero_within(io.annihilation.truncated(0), m.tol, 1.0);
    s.flags["iota_parallel"] = zero_within(io.connection.values(), m.tol, kappa);
    s.flags["iota_metric"] = zero_within(io.metric.truncated(0), m.tol, 1.0);
    return s;
  }

  ReportSection wedge(const ProjectiveCurvature<T>& pc) {
    ReportSection s;
    const auto a = metric_symmetry_map(pc.W.values());
    const WedgeObstruction<T> w = wedge_obstruction(a, m.tol);
    s.integers["rank_e"] = w.rank_e;
    s.integers["rank_f"] = w.rank_f;
    s.integers["rank"] = w.rank;
    s.flags["vanishes"] = w.vanishes;
    s.flags["all_minors"] = w.all_minors;
    if (w.all_minors) {
      double mx = 0.0;
      for (const T& v : w.minors) mx = std::max(mx, std::abs(RingTraits<T>::to_double(v)));
      s.integers["minor_count"] = static_cast<long long>(w.minors.size());
      s.scalars["max_minor"] = mx;
    }
    if (!w.witness_columns.empty()) {
      auto& cols = s.lists["witness_columns"];
      for (int c : w.witness_columns) cols.push_back(Rational(c));
      s.scalars["witness_minor"] = report_value(w.witness_minor);
    }
    if (!w.kernel.empty()) {
      auto& ker = s.lists["kernel"];
      for (const T& v : w.kernel) ker.push_back(report_value(v));
    }
    if constexpr (!RingTraits<T>::exact) s.scalars["margin"] = w.margin;
    return s;
  }

  void run() {
    const std::vector<Point> pts = m.chart.sample_points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& p = pts[i];
      PointReport pr;
      pr.index = static_cast<int>(i);
      pr.coordinates = p;
      const ConnectionJet<T> c = watch.time("jets", [&] { return jet_at(p); });
      const ProjectiveCurvature<T> pc = watch.time("curvature", [&] { return projective_curvature(c.gamma); });
      const Tensor<T> C = watch.time("curvature", [&] { return cotton(pc.P, c.gamma); });
      const bool need_omega = m.tractor_verify || !m.chern.empty();
      const Tensor<T> Omega = need_omega ? tractor_curvature(pc.W, C) : Tensor<T>();
      if (m.invariants) pr.sections["invariants"] = watch.time("invariants", [&] { return invariants(c, pc, C); });
      if (!m.chern.empty()) pr.sections["chern"] = watch.time("chern", [&] { return chern(pc, Omega); });
      if (m.tractor_verify) pr.sections["tractor"] = watch.time("tractor-verify", [&] { return tractor(c, pc, Omega); });
      if (m.einstein) pr.sections["einstein"] = watch.time("einstein-check", [&] { return einstein(c, p); });
      if (m.conformal_bridge) pr.sections["conformal"] = watch.time("conformal-bridge", [&] { return conformal(p, i); });
      if (m.wedge_obstruction) pr.sections["wedge"] = watch.time("wedge-obstruction", [&] { return wedge(pc); });
      report.points.push_back(std::move(pr));
    }
    if (m.einstein) {
      const Verdict<T> v = classify(std::move(einstein_points), *m.einstein, m.tol);
      report.verdict = VerdictRecord{classification_name(v.classification), v.criterion, v.reason, v.strategy};
    }
  }
};

}  // namespace

Report run_manifest(const Manifest& m) {
  Report r;
  r.manifest = m.echo;
  r.connection = describe_source(m);
  r.seed = m.chart.seed;
  r.tolerance = m.tol;
  const Ring ring = m.effective_ring();
  r.ring = ring_name(ring);
  if (m.conformal_bridge && m.shift)
    r.diagnostics.push_back("conformal-bridge works on the metric itself; the shift does not enter it");
  if (ring == Ring::Exact) {
    Runner<Rational>(m, r).run();
  } else {
    Runner<double>(m, r).run();
  }
  if (!m.timing) r.timing.clear();
  return r;
}

}  // namespace tk
