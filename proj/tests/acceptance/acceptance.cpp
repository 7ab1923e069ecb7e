// Acceptance suite: one PASS/FAIL line per criterion, sub-check detail
// indented underneath. Exit status 1 when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tractorkit/conformal.hpp"
#include "tractorkit/curvature.hpp"
#include "tractorkit/einstein.hpp"
#include "tractorkit/generators.hpp"
#include "tractorkit/manifest.hpp"
#include "tractorkit/natural_q.hpp"
#include "tractorkit/obstructions.hpp"
#include "tractorkit/pipeline.hpp"
#include "tractorkit/report.hpp"
#include "tractorkit/tractor.hpp"

using tk::ExactTensor;
using tk::Rational;

namespace {

// Pinned tolerances.
constexpr double kRicciFlatRelTol = 1e-8;   // |G| against the curvature scale (criterion 5)
constexpr double kWeylSquareRelTol = 1e-8;  // 4WW - |W|^2 delta against the curvature scale squared
constexpr double kFloatTol = 1e-8;          // float-ring tolerance passed to the detector
constexpr double kInvarianceBudget = 60.0;  // seconds, criterion 1

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::vector<std::string> lines;

  void check(bool cond, const std::string& what) {
    if (!cond) ok = false;
    lines.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { lines.push_back("note " + what); }
};

std::vector<Criterion> g_results;

void report(Criterion c) {
  std::printf("%s %d %s\n", c.ok ? "PASS" : "FAIL", c.id, c.title.c_str());
  for (const auto& l : c.lines) std::printf("    %s\n", l.c_str());
  std::fflush(stdout);
  g_results.push_back(std::move(c));
}

/// Runs body, turning an escaped exception into a failed sub-check.
void guarded(Criterion& c, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    c.check(false, std::string("unexpected exception: ") + e.what());
  }
}

tk::Point random_point(int n, std::uint64_t seed, Rational lo = Rational(-1, 2), Rational hi = Rational(1, 2)) {
  return tk::random_points(std::vector<std::pair<Rational, Rational>>(static_cast<std::size_t>(n), {lo, hi}), 1, seed)[0];
}

std::vector<tk::Point> five_points(const tk::Builtin& b, std::uint64_t seed) {
  tk::ChartSpec c = b.chart;
  c.points.clear();
  c.random_count = 5;
  c.seed = seed;
  return c.sample_points();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ExactTensor random_cotractor(int n, const tk::Point& p, int order, std::mt19937_64& rng) {
  const ExactTensor mu = tk::one_form_jet<Rational>(tk::random_polynomial_one_form(n, 2, rng), p, order);
  const tk::Expr s = tk::Polynomial::random(n, 2, rng).to_expr();
  return tk::make_cotractor(mu, ExactTensor::scalar(n, s.evaluate<Rational>(tk::coordinate_jets<Rational>(p, order))));
}

ExactTensor random_tractor(int n, const tk::Point& p, int order, std::mt19937_64& rng) {
  const ExactTensor f = tk::one_form_jet<Rational>(tk::random_polynomial_one_form(n, 2, rng), p, order);
  ExactTensor nu = ExactTensor::of(n, "u");
  for (int i = 0; i < n; ++i) nu(i) = f(i);
  const tk::Expr s = tk::Polynomial::random(n, 2, rng).to_expr();
  return tk::make_tractor(nu, ExactTensor::scalar(n, s.evaluate<Rational>(tk::coordinate_jets<Rational>(p, order))));
}

// ---------------------------------------------------------------------------

void projective_invariance() {
  Criterion c{1, "projective invariance of W, P/beta, Cotton, tractor connection, G and E (exact)"};
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xacce55001);
  int generic = 0;
  int w_ok = 0, pb_ok = 0, cotton_ok = 0, tractor_ok = 0, ge_ok = 0;
  const int trials = 20;
  guarded(c, [&] {
    for (int t = 0; t < trials; ++t) {
      const int n = 2 + t % 3;
      const auto src = tk::random_polynomial_connection(n, 2, rng);
      const auto u = tk::random_polynomial_one_form(n, 2, rng);
      const tk::Point p = random_point(n, 1000 + static_cast<std::uint64_t>(t));
      const auto cj = tk::connection_jet<Rational>(src, p, 4);
      const ExactTensor up = tk::one_form_jet<Rational>(u, p, 4);
      const auto ch = tk::projective_shift(cj, up);

      const auto pc = tk::projective_curvature(cj.gamma);
      const auto ph = tk::projective_curvature(ch.gamma);
      w_ok += ph.W == pc.W;
      const auto [P_pred, beta_pred] = tk::schouten_transform(pc.P, pc.beta, up, cj.gamma);
      pb_ok += (ph.P == P_pred && ph.beta == beta_pred);
      cotton_ok += tk::cotton_transform_residual(cj.gamma, up).is_zero();

      const auto tc = tk::tractor_connection(cj);
      const auto tch = tk::tractor_connection(ch);
      const ExactTensor U = random_cotractor(n, p, 4, rng);
      const ExactTensor V = random_tractor(n, p, 4, rng);
      const bool co = tk::cotractor_derivative(tk::change_splitting(U, up), tch) == tk::change_splitting(tk::cotractor_derivative(U, tc), up);
      const bool tr = tk::tractor_derivative(tk::change_splitting(V, up), tch) == tk::change_splitting(tk::tractor_derivative(V, tc), up);
      tractor_ok += co && tr;

      const auto s = tk::LeftInverseStrategy::pseudo_inverse();
      if (!tk::weak_genericity(pc.W).ok) continue;
      ++generic;
      const auto a = tk::analyze_point(cj, p, s);
      const auto b = tk::analyze_point(ch, p, s);
      ge_ok += a.evaluated && b.evaluated && (a.G - b.G).is_zero() && (a.E - b.E).is_zero();
    }
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.check(w_ok == trials, "W unchanged: " + std::to_string(w_ok) + "/" + std::to_string(trials));
  c.check(pb_ok == trials, "P and beta follow the transformation law: " + std::to_string(pb_ok) + "/" + std::to_string(trials));
  c.check(cotton_ok == trials, "Cotton change law: " + std::to_string(cotton_ok) + "/" + std::to_string(trials));
  c.check(tractor_ok == trials, "tractor connection commutes with the splitting change: " + std::to_string(tractor_ok) + "/" +
                                    std::to_string(trials));
  c.check(generic > 0 && ge_ok == generic,
          "G and E unchanged on weakly generic samples: " + std::to_string(ge_ok) + "/" + std::to_string(generic) + " (" +
              std::to_string(trials - generic) + " samples not weakly generic, all n = 2)");
  c.check(secs < kInvarianceBudget, "runtime " + fmt(secs) + " s (budget " + fmt(kInvarianceBudget) + " s)");
  report(std::move(c));
}

void chern_forms() {
  Criterion c{2, "Chern forms: p(R) = p(W) on scale connections, q = p, odd p on Levi-Civita, omega wedge B, brute force"};
  std::mt19937_64 rng(0xacce55002);
  guarded(c, [&] {
    int agree = 0, total = 0;
    for (int n : {4, 5, 6}) {
      const auto g = tk::christoffel_jet<Rational>(tk::random_polynomial_connection(n, 2, rng, true), random_point(n, 2000 + static_cast<std::uint64_t>(n)), 1);
      const auto pc = tk::projective_curvature(g);
      for (int k = 1; 2 * k <= n; ++k, ++total)
        agree += tk::p_form(pc, k, tk::ChernInput::Curvature) == tk::p_form(pc, k, tk::ChernInput::Weyl);
    }
    c.check(agree == total, "p_k(R) = p_k(W) for scale connections, n = 4..6: " + std::to_string(agree) + "/" + std::to_string(total));
  });
  guarded(c, [&] {
    int agree = 0, total = 0;
    for (int n : {2, 3, 4, 5}) {
      const auto cj = tk::connection_jet<Rational>(tk::random_polynomial_connection(n, 2, rng), random_point(n, 2100 + static_cast<std::uint64_t>(n)), 2);
      const auto pc = tk::projective_curvature(cj.gamma);
      const ExactTensor Omega = tk::tractor_curvature(pc.W, tk::cotton(pc.P, cj.gamma));
      for (int k = 1; 2 * k <= n; ++k, ++total) agree += (tk::q_form(Omega, k) - tk::p_form(pc, k, tk::ChernInput::Weyl)).is_zero();
    }
    c.check(agree == total, "q_k = p_k on generic connections, n = 2..5: " + std::to_string(agree) + "/" + std::to_string(total));
  });
  guarded(c, [&] {
    int zero = 0, total = 0;
    std::string where;
    for (const std::string& name : tk::builtin_names()) {
      for (int n : {2, 3, 4, 6}) {
        const tk::Builtin b = tk::builtin(name, n);
        if (b.source.kind != tk::ConnectionSource::Kind::Metric) continue;
        if (b.source.dim != n && n != 4) continue;  // fixed-dimension builtins once
        const tk::Point p = b.chart.sample_points()[0];
        for (int k = 1; 2 * k <= b.source.dim; k += 2) {
          ++total;
          if (b.float_only) {
            const auto pc = tk::projective_curvature(tk::christoffel_jet<double>(b.source, p, 1));
            const double scale = pc.R.max_abs();
            zero += tk::p_form(pc.R, k).max_abs() <= kFloatTol * std::pow(scale, k);
          } else {
            const auto pc = tk::projective_curvature(tk::christoffel_jet<Rational>(b.source, p, 1));
            zero += tk::p_form(pc.R, k).is_zero();
          }
          where += " " + name + "(n=" + std::to_string(b.source.dim) + ",k=" + std::to_string(k) + ")";
        }
      }
    }
    c.check(zero == total, "odd p_k = 0 on Levi-Civita builtins: " + std::to_string(zero) + "/" + std::to_string(total) + ":" + where);
  });
  guarded(c, [&] {
    int agree = 0, total = 0;
    const auto cj = tk::connection_jet<Rational>(tk::random_polynomial_connection(4, 2, rng), random_point(4, 2200), 2);
    const auto pc = tk::projective_curvature(cj.gamma);
    const ExactTensor Omega = tk::tractor_curvature(pc.W, tk::cotton(pc.P, cj.gamma));
    for (int k = 1; k <= 2; ++k) {
      total += 3;
      agree += tk::p_form(pc.R, k) == tk::p_form_bruteforce(pc.R, k);
      agree += tk::p_form(pc.W, k) == tk::p_form_bruteforce(pc.W, k);
      agree += (tk::p_form(Omega, k) - tk::p_form_bruteforce(Omega, k)).is_zero();
    }
    c.check(agree == total, "brute-force oracle agreement, n = 4, k <= 2 (R, W, Omega): " + std::to_string(agree) + "/" + std::to_string(total));
  });
  guarded(c, [&] {
    // The closed form at the smallest dimension where the construction exists.
    const auto ob9 = tk::omega_b(9, 3);
    if (!ob9) {
      c.check(false, "omega wedge B construction in n = 9, k = 3 unavailable");
      return;
    }
    Rational fact(1);
    for (int i = 2; i <= 6; ++i) fact *= Rational(i);
    const Rational expected = Rational(8) / fact * ob9->omega_wedge * ob9->trace_power;
    const Rational got = tk::p_form(ob9->A, 3)(0, 1, 2, 3, 4, 5).value();
    c.note("n = 9, k = 3: p_3(e1..e6) = " + got.to_string() + ", closed form (2^3/6!) w^3 tr(B^3) = " + expected.to_string());
    c.check(got == expected && got != Rational(0), "n = 9: p_3 != 0 and matches the closed form");
  });
  guarded(c, [&] {
    const auto ob8 = tk::omega_b(8, 3);
    if (ob8) {
      const Rational got = tk::p_form(ob8->A, 3)(0, 1, 2, 3, 4, 5).value();
      c.check(got != Rational(0), "n = 8: p_3 != 0 at the origin");
      return;
    }
    const auto best = tk::omega_b(8, 3, false);
    const bool vanishes = best && tk::p_form(best->A, 3).is_zero();
    c.note("n = 8, k = 3: w^3 != 0 leaves a 2-dimensional kernel for B, so tr B = 0 forces tr(B^3) = 0");
    c.note(std::string("n = 8 with the best available B (diag(1,-1) on the kernel): p_3 ") + (vanishes ? "= 0" : "!= 0"));
    c.check(false, "n = 8: p_3 != 0 at the origin (no admissible w, B exists in n = 8 for k = 3)");
  });
  report(std::move(c));
}

void tractor_einstein() {
  Criterion c{3, "Einstein submetrics are parallel, Omega is h-skew, Omega X = 0"};
  struct Case {
    const char* name;
    int n;
  };
  for (const Case& k : {Case{"sphere", 2}, Case{"sphere", 3}, Case{"sphere", 4}, Case{"hyperbolic", 3}, Case{"hyperbolic", 4},
                        Case{"s2xs2", 4}}) {
    guarded(c, [&] {
      const tk::Builtin b = tk::builtin(k.name, k.n);
      int parallel = 0, skew = 0, onx = 0;
      const auto points = five_points(b, 0xacce55003);
      for (const auto& p : points) {
        const auto cj = tk::connection_jet<Rational>(b.source, p, 2);
        const auto tc = tk::tractor_connection(cj);
        const ExactTensor h = tk::einstein_submetric(tc, *b.einstein_lambda);
        parallel += tk::submetric_derivative(h, tc).is_zero() && tk::tractor_covariant_derivative(h, tc).is_zero();
        const auto pc = tk::projective_curvature(cj.gamma);
        const ExactTensor Omega = tk::tractor_curvature(pc.W, tk::cotton(pc.P, cj.gamma));
        skew += tk::skew_residual(Omega, h).is_zero();
        onx += tk::curvature_on_X(Omega).is_zero();
      }
      const int m = static_cast<int>(points.size());
      c.check(parallel == m && skew == m && onx == m,
              std::string(k.name) + " n=" + std::to_string(k.n) + ": parallel " + std::to_string(parallel) + "/" + std::to_string(m) +
                  ", skew " + std::to_string(skew) + "/" + std::to_string(m) + ", Omega X = 0 " + std::to_string(onx) + "/" +
                  std::to_string(m));
    });
  }
  report(std::move(c));
}

void detector_round_trip() {
  Criterion c{4, "S2 x S2 shifted by 10 random Upsilon: EINSTEIN_NONZERO, Upsilon and G = g/3 recovered exactly"};
  const tk::Builtin b = tk::builtin("s2xs2");
  const auto points = b.chart.sample_points();
  bool generic = true;
  guarded(c, [&] {
    for (const auto& p : points) {
      const auto W = tk::projective_curvature(tk::christoffel_jet<Rational>(b.source, p, 1)).W;
      const auto g = tk::weak_genericity(W);
      const auto gf = tk::weak_genericity(tk::to_float(W));
      c.note("genericity at point: rank " + std::to_string(g.rank) + "/4, margin " + fmt(gf.margin));
      generic = generic && g.ok;
    }
    c.check(generic, "weakly generic at all " + std::to_string(points.size()) + " sample points");
  });
  if (!generic) {
    report(std::move(c));
    return;
  }
  std::mt19937_64 rng(0xacce55004);
  int verdicts = 0, ups = 0, gs = 0;
  guarded(c, [&] {
    for (int t = 0; t < 10; ++t) {
      const auto u = tk::random_polynomial_one_form(4, 2, rng);
      const auto jets = [&](const tk::Point& p) {
        return tk::projective_shift(tk::connection_jet<Rational>(b.source, p, 4), tk::one_form_jet<Rational>(u, p, 4));
      };
      const auto v = tk::verdict<Rational>(jets, points, tk::LeftInverseStrategy::pseudo_inverse());
      verdicts += v.classification == tk::Classification::EinsteinNonzero;
      bool u_ok = true, g_ok = true;
      for (const auto& ep : v.points) {
        if (!ep.evaluated) {
          u_ok = g_ok = false;
          continue;
        }
        const ExactTensor u0 = tk::one_form_jet<Rational>(u, ep.point, ep.upsilon.min_order());
        u_ok = u_ok && (ep.upsilon + u0).is_zero();
        const ExactTensor g = tk::metric_jet<Rational>(b.source, ep.point, ep.G.min_order());
        g_ok = g_ok && (ep.G - g * Rational(1, 3)).is_zero();
      }
      ups += u_ok;
      gs += g_ok;
    }
  });
  c.check(verdicts == 10, "EINSTEIN_NONZERO: " + std::to_string(verdicts) + "/10");
  c.check(ups == 10, "detected Upsilon equals minus the applied shift, as jets: " + std::to_string(ups) + "/10");
  c.check(gs == 10, "G = lambda g with lambda = 1/3 (Ric = g): " + std::to_string(gs) + "/10");
  report(std::move(c));
}

void ricci_flat_branch() {
  Criterion c{5, "Schwarzschild (float): G = 0 relative to the curvature scale, PROJECTIVELY_RICCI_FLAT, 4 W W = |W|^2 delta"};
  guarded(c, [&] {
    const tk::Builtin b = tk::builtin("schwarzschild");
    const auto points = b.chart.sample_points();
    const auto v = tk::verdict<double>(b.source, points, tk::LeftInverseStrategy::pseudo_inverse(), kFloatTol);
    c.check(v.classification == tk::Classification::ProjectivelyRicciFlat,
            std::string("verdict ") + tk::classification_name(v.classification) + " (" + v.criterion + ")");
    for (const auto& ep : v.points) {
      const double bound = kRicciFlatRelTol * ep.curvature_scale;
      c.check(ep.evaluated && ep.G_norm < bound, "|G| = " + fmt(ep.G_norm) + " < " + fmt(bound));
      const auto m = tk::metric_geometry(tk::metric_jet<double>(b.source, ep.point, 2));
      const auto cc = tk::conformal_decompose(m);
      const double r = tk::weyl_square_residual(cc, m).max_abs();
      const double wb = kWeylSquareRelTol * ep.curvature_scale * ep.curvature_scale;
      c.check(r < wb, "|4 W W - |W|^2 delta| = " + fmt(r) + " < " + fmt(wb));
    }
  });
  report(std::move(c));
}

void negative_detection() {
  Criterion c{6, "prescribed generic Weyl tensor, n = 4: 2E_[ij]k != 0, NOT_EINSTEIN, 2E_[ij]k = C - W D C exactly"};
  guarded(c, [&] {
    const tk::Builtin b = tk::builtin("prescribed-weyl");
    const auto points = b.chart.sample_points();
    const auto v = tk::verdict<Rational>(b.source, points, tk::LeftInverseStrategy::pseudo_inverse());
    c.check(v.classification == tk::Classification::NotEinstein,
            std::string("verdict ") + tk::classification_name(v.classification) + " (" + v.criterion + ")");
    // Gamma is linear in x, so P is quadratic and C vanishes at the origin;
    // 2E_[ij]k can only be nonzero away from it.
    int nonzero = 0, identity = 0, evaluated = 0, away = 0;
    bool origin_zero = true;
    for (const auto& ep : v.points) {
      if (!ep.evaluated) continue;
      ++evaluated;
      identity += ep.E_skew == ep.cotton_flat;
      bool at_origin = true;
      for (const auto& x : ep.point) at_origin = at_origin && x == Rational(0);
      if (at_origin) {
        origin_zero = origin_zero && ep.C.values().is_zero() && ep.E_skew.is_zero();
        continue;
      }
      ++away;
      nonzero += !ep.E_skew.is_zero();
    }
    const std::string of = "/" + std::to_string(evaluated);
    c.check(evaluated == static_cast<int>(points.size()), "evaluated at " + std::to_string(evaluated) + "/" + std::to_string(points.size()) + " points");
    c.check(away > 0 && nonzero == away, "2E_[ij]k != 0 away from the origin: " + std::to_string(nonzero) + "/" + std::to_string(away));
    c.check(origin_zero, "C = 0 and 2E_[ij]k = 0 at the origin, where the connection vanishes to first order");
    c.check(identity == evaluated, "2E_[ij]k = C_kij - W_ij^l_k X_l: " + std::to_string(identity) + of);
  });
  report(std::move(c));
}

void conformal_bridge() {
  Criterion c{7, "conformal bridge on S2 x S2 (Weyl, Schouten halving, iota checks) and W = 0 on S3"};
  std::mt19937_64 rng(0xacce55007);
  guarded(c, [&] {
    const tk::Builtin b = tk::builtin("s2xs2");
    const auto points = b.chart.sample_points();
    int weyl = 0, half = 0, iota = 0;
    for (const auto& p : points) {
      const auto m = tk::metric_geometry(tk::metric_jet<Rational>(b.source, p, 3));
      const auto cmp = tk::compare_weyl(m);
      weyl += cmp.einstein && cmp.residual.is_zero();
      const auto sh = tk::schouten_halving_check(m);
      half += sh.residual.is_zero() && sh.lambda_residual.is_zero() && sh.J * Rational(2) == Rational(4) * sh.lambda;
      const auto r = tk::iota_checks(m, random_cotractor(4, p, 3, rng), random_cotractor(4, p, 3, rng));
      iota += r.annihilation.is_zero() && r.connection.is_zero() && r.metric.is_zero();
    }
    const std::string of = "/" + std::to_string(points.size());
    c.check(weyl == static_cast<int>(points.size()), "conformal W = projective W: " + std::to_string(weyl) + of);
    c.check(half == static_cast<int>(points.size()), "conformal P = projective P / 2, P = lambda g, J = n lambda / 2: " + std::to_string(half) + of);
    c.check(iota == static_cast<int>(points.size()), "iota annihilated by I, intertwines connections, pulls back the metric: " + std::to_string(iota) + of);
  });
  guarded(c, [&] {
    const tk::Builtin s3 = tk::builtin("sphere", 3);
    int zero = 0;
    const auto points = s3.chart.sample_points();
    for (const auto& p : points) zero += tk::projective_curvature(tk::christoffel_jet<Rational>(s3.source, p, 2)).W.is_zero();
    c.check(zero == static_cast<int>(points.size()), "S3 projective W = 0: " + std::to_string(zero) + "/" + std::to_string(points.size()));
  });
  report(std::move(c));
}

void natural_q() {
  Criterion c{8, "natural Q, n = 4, N = (2), F = 1: Q' W = Q and D_(Q) W = delta exactly"};
  std::mt19937_64 rng(0xacce55008);
  const tk::NaturalQInput in = tk::NaturalQInput::standard(4);
  int samples = 0, qq = 0, nondeg = 0, dw = 0;
  guarded(c, [&] {
    for (int t = 0; t < 6; ++t) {
      const tk::Point p = random_point(4, 8000 + static_cast<std::uint64_t>(t));
      const ExactTensor W = tk::projective_curvature(tk::christoffel_jet<Rational>(tk::random_polynomial_connection(4, 2, rng), p, 2)).W;
      if (!tk::weak_genericity(W).ok) continue;
      ++samples;
      const ExactTensor Q = tk::natural_Q(W, in);
      const ExactTensor Qp = tk::natural_Q(W, in.primed());
      qq += tk::contract_product(Qp, W, {{0, 0}, {1, 1}, {3, 3}}) == Q;
      try {
        const auto nl = tk::natural_left_inverse(W, in);
        ++nondeg;
        dw += tk::left_inverse_residual(nl.D, W).is_zero();
      } catch (const tk::GenericityFailure&) {
      }
    }
  });
  c.check(samples > 0 && qq == samples, "Q' W = Q on weakly generic samples: " + std::to_string(qq) + "/" + std::to_string(samples));
  c.check(nondeg > 0 && dw == nondeg, "D W = delta where ||Q|| != 0: " + std::to_string(dw) + "/" + std::to_string(nondeg));
  report(std::move(c));
}

void determinism() {
  Criterion c{9, "determinism: byte-identical exact-ring reports under a fixed seed"};
  guarded(c, [&] {
    for (const char* name : {"shifted_christoffel.ini", "s2xs2.ini", "prescribed.ini"}) {
      const tk::Manifest m = tk::load_manifest(std::string(TRACTORKIT_TEST_DATA) + "/" + name);
      const std::string a = tk::serialize_report(tk::run_manifest(m));
      const std::string b = tk::serialize_report(tk::run_manifest(m));
      c.check(a == b && tk::parse_report(a) == tk::parse_report(b), std::string(name) + ": " + std::to_string(a.size()) + " bytes, identical");
    }
  });
  report(std::move(c));
}

}  // namespace

int main() {
  projective_invariance();
  chern_forms();
  tractor_einstein();
  detector_round_trip();
  ricci_flat_branch();
  negative_detection();
  conformal_bridge();
  natural_q();
  determinism();
  int failed = 0;
  for (const auto& c : g_results) failed += !c.ok;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed, g_results.size());
  return failed == 0 ? 0 : 1;
}
