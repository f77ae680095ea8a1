#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gcv/branes.hpp"
#include "gcv/gcs.hpp"
#include "gcv/lefschetz.hpp"
#include "gcv/scenario.hpp"
#include "gcv/sexpr.hpp"
#include "gcv/surgery.hpp"
#include "gcv/topo.hpp"

#ifndef GCV_SCENARIO_DIR
#define GCV_SCENARIO_DIR "scenarios"
#endif

using namespace gcv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Collects failure notes; a criterion passes when none are recorded.
struct Notes {
  std::vector<std::string> items;
  void require(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
  /// Runs a timed step and records it when it overruns.
  void timed(const std::string& what, double limit, const std::function<void()>& step) {
    auto t0 = Clock::now();
    step();
    double t = seconds_since(t0);
    if (t >= limit) {
      std::ostringstream s;
      s << what << " took " << t << " s (limit " << limit << " s)";
      items.push_back(s.str());
    }
  }
};

struct C2Env {
  Context ctx;
  ChartPtr c2 = models::c2_chart("C2");
  ChartPtr s = Chart::Builder("S").coordinate("s").coordinate("t").build();
  C2Env() {
    ctx.add_chart(c2);
    ctx.add_chart(s);
  }
  Form f(std::string_view text) const { return ctx.eval_form(text, c2); }
  Scalar on_s(std::string_view text) const { return ctx.eval_scalar(text, s); }
  BraneData graph(std::string_view x, std::string_view y, std::string_view u, std::string_view v,
                  std::string_view f) const {
    return BraneData{s, {{"x", on_s(x)}, {"y", on_s(y)}, {"u", on_s(u)}, {"v", on_s(v)}}, ctx.eval_form(f, s)};
  }
};

Point c2pt(const mpq_class& x, const mpq_class& y, const mpq_class& u, const mpq_class& v) {
  return {{"x", x}, {"y", y}, {"u", u}, {"v", v}};
}

std::vector<Point> st_grid() {
  return {{{"s", 0}, {"t", 0}}, {{"s", 1}, {"t", 0}}, {{"s", 0}, {"t", 1}}, {{"s", -1}, {"t", mpq_class(1, 2)}},
          {{"s", 2}, {"t", -3}}};
}

void identities(Notes& n) {
  C2Env e;
  GCModel tc = models::typechange_model(e.c2);
  n.timed("type-change witness", 1, [&] {
    n.require(integrability_witness(tc).witness == e.ctx.eval_gvec("(- (partial z))", e.c2), "witness is not -d/dz");
  });
  n.timed("Mukai pairing", 1, [&] {
    n.require(mukai(tc.rho, tc.rho.conj()) == e.f("(wedge dw dwbar dz dzbar)"), "Mukai pairing differs");
  });
  n.timed("beta transform", 1, [&] {
    Bivector beta = e.ctx.eval_bivector("(* w (wedge (partial w) (partial z)))", e.c2);
    n.require(beta_transform(beta, e.f("(wedge dw dz)")) == e.f("(+ w (wedge dw dz))"), "beta transform differs");
  });
  n.timed("blow-up pullbacks", 1, [&] {
    BlowupCharts b = build_blowup();
    auto r = verify_blowup_holomorphic(b);
    n.require(r.ok() && r.charts.size() == 2 && r.charts[0].factor == "w" && r.charts[1].factor == "z",
              "blow-up charts are not holomorphic with factors w, z");
    Context ctx;
    ctx.add_chart(b.chart1.chart());
    ctx.add_chart(b.chart2.chart());
    n.require(substitute(b.base.rho, b.pi1) == ctx.eval_form("(+ w (* w dw dzt))", b.chart1.chart()),
              "chart 1 pullback differs");
    n.require(substitute(b.base.rho, b.pi2) == ctx.eval_form("(+ (* wt z) (* z dwt dz))", b.chart2.chart()),
              "chart 2 pullback differs");
  });
  for (int a : {1, 2, 3}) {
    n.timed("divisor gluing a=" + std::to_string(a), 1, [&] {
      auto g = models::divisor_gluing(a, true);
      n.require(verify_gluing(g.lhs, g.rhs, g.map, g.g, g.b).ok, "divisor gluing fails for a=" + std::to_string(a));
    });
  }
  n.timed("B + i omega", 1, [&] {
    Form b = e.f("(* (/ 1 (+ (^ x 2) (^ y 2))) (+ (* x (- (wedge dx du) (wedge dy dv))) (* y (+ (wedge dx dv) (wedge dy du)))))");
    Form w = e.f("(* (/ 1 (+ (^ x 2) (^ y 2))) (- (* x (+ (wedge dx dv) (wedge dy du))) (* y (- (wedge dx du) (wedge dy dv)))))");
    Form sum = b + w.scaled(Gauss(0, 1));
    n.require(sum == e.f("(/ (wedge dw dz) w)"), "B + i omega differs from dw^dz/w");
    n.require(exp_form(sum).scaled(e.c2->complex_value("w")) == tc.rho, "w e^(B + i omega) differs from rho");
  });
  n.timed("log-transform gluing", 1, [&] {
    LogTransformData d = build_logtransform();
    auto r = verify_logtransform_gluing(d);
    n.require(r.ok && r.lhs == d.omega.scaled(Gauss(0, 1)), "B01 + phi*(exponent) differs from i omega");
    n.require(r.cross_multiplied && r.prefactor_units, "log-transform prefactor check fails");
  });
}

void types(Notes& n) {
  C2Env e;
  GCModel tc = models::typechange_model(e.c2);
  for (const auto& u : {mpq_class(-2), mpq_class(0), mpq_class(1, 2), mpq_class(3)}) {
    for (const auto& v : {mpq_class(-1), mpq_class(0), mpq_class(2)}) {
      n.require(type_at(tc, c2pt(0, 0, u, v)) == 2, "type on w = 0 is not 2");
      n.require(type_at(tc, c2pt(1, 0, u, v)) == 0, "type at w = 1 is not 0");
      n.require(type_at(tc, c2pt(mpq_class(-1, 3), 2, u, v)) == 0, "type off w = 0 is not 0");
    }
  }
  GCModel order2 = models::line_bundle_model(e.c2, 2);
  n.require(degeneracy_order(order2, c2pt(0, 0, 0, 0), c2pt(1, 0, 0, 0)) == 2, "order-2 model degeneracy is not 2");
  n.require(type_at(order2, c2pt(0, 0, 1, 1)) == 2, "order-2 model type at w = 0 is not 2");
}

void brane_suite(Notes& n) {
  C2Env e;
  auto f2 = f_extension(e.s, e.on_s("0"), e.on_s("(+ (^ s 2) (^ t 2))"));
  n.require(f2.f && *f2.f == e.on_s("2"), "f for (0, x^2+y^2) is not 2");
  auto f0 = f_extension(e.s, e.on_s("(- (^ s 2) (^ t 2))"), e.on_s("(* 2 s t)"));
  n.require(f0.f && f0.f->is_zero(), "f for z = w^2 is not 0");

  auto grid = st_grid();
  for (int order : {1, 2}) {
    GCModel m = models::line_bundle_model(e.c2, order);
    for (const auto& b : {e.graph("s", "t", "0", "0", "0"), e.graph("0", "0", "s", "t", "0"),
                          e.graph("2", "-1", "s", "t", "0"),
                          e.graph("s", "t", "(- (^ s 2) (^ t 2))", "(* 2 s t)", "0")}) {
      n.require(tau_invariance_at(m, b, grid).ok(), "complex curve fails tau invariance");
    }
    // F is unique off the complex locus only, so perturb curves not contained in it.
    for (const auto& b : {e.graph("s", "t", "0", "0", "(wedge ds dt)"), e.graph("2", "-1", "s", "t", "(wedge ds dt)"),
                          e.graph("s", "t", "(- (^ s 2) (^ t 2))", "(* 2 s t)", "(wedge ds dt)")}) {
      n.require(!tau_invariance_at(m, b, grid).ok(), "perturbed F passes tau invariance");
    }
  }
  GCModel tc = models::typechange_model(e.c2);
  n.require(tau_invariance_at(tc, e.graph("s", "t", "0", "(+ (^ s 2) (^ t 2))", "(* -2 (wedge ds dt))"), grid).ok(),
            "graph brane with F = -f ds^dt fails");
  n.require(!tau_invariance_at(tc, e.graph("s", "t", "0", "(+ (^ s 2) (^ t 2))", "(* -1 (wedge ds dt))"), grid).ok(),
            "graph brane with perturbed F passes");

  n.require(normal_euler({true, 0, 1, 1}) == -1, "(sphere, 1) is not -1");
  n.require(normal_euler({true, 0, 2, 1}) == 0, "(sphere, 2) is not 0");
  n.require(normal_euler({true, 1, 0, 0}) == 0, "(torus, 0) is not 0");
}

void picard_lefschetz(Notes& n) {
  n.require(twist(parse_cycle("a-3b"), parse_cycle("a-4b"), -1) == -cycle_b, "twist(a-3b, a-4b, -1) is not -b");
  n.timed("exhaustive pairing check", 10, [&] {
    bool ok = true;
    for (long p1 = -5; p1 <= 5; ++p1)
      for (long q1 = -5; q1 <= 5; ++q1)
        for (long p2 = -5; p2 <= 5; ++p2)
          for (long q2 = -5; q2 <= 5; ++q2)
            for (long p3 = -5; p3 <= 5; ++p3)
              for (long q3 = -5; q3 <= 5; ++q3)
                for (int d : {-1, 1}) {
                  Cycle v{p1, q1}, c{p2, q2}, x{p3, q3};
                  ok = ok && intersection(twist(v, c, d), twist(v, x, d)) == intersection(c, x);
                }
    n.require(ok, "twist does not preserve the pairing");
  });
}

void monodromy(Notes& n) {
  n.timed("E(1) certificate", 60, [&] {
    BuiltFibration e1 = build_E1(4);
    n.require(e1.certificate.has_value(), "no certificate within budget 4");
    if (e1.certificate) {
      n.require(total_monodromy(replay(e1.word, *e1.certificate)) == identity2(), "certified word is not the identity");
    }
  });
  n.timed("Hurwitz invariance", 10, [&] {
    std::mt19937_64 rng(0x4e1a);
    std::uniform_int_distribution<long> entry(-4, 4);
    std::uniform_int_distribution<int> len(2, 12), coin(0, 1);
    int preserved = 0;
    for (int t = 0; t < 1000; ++t) {
      FibrationWord w;
      int k = len(rng);
      for (int i = 0; i < k; ++i) {
        Cycle c{entry(rng), entry(rng)};
        w.cycles.push_back(c == Cycle{} ? cycle_b : c);
      }
      std::uniform_int_distribution<std::size_t> idx(0, w.size() - 2);
      if (total_monodromy(hurwitz_move(w, idx(rng), coin(rng) ? 1 : -1)) == total_monodromy(w)) ++preserved;
    }
    n.require(preserved == 1000, "Hurwitz move changed the monodromy");
  });
}

void brane_counts(Notes& n) {
  n.require(brane_search(log_mark(build_En(1, 0).word, cycle_b), 0).witnesses.size() == 9, "E^(1) count is not 9");
  n.timed("E^(2) search", 60, [&] {
    FibrationWord w = log_mark(build_En(2, 0).word, cycle_b);
    auto search = brane_search(w, 3);
    n.require(search.witnesses.size() == 19, "E^(2) count is " + std::to_string(search.witnesses.size()));
    bool gamma = false;
    for (const auto& b : search.witnesses) {
      if (w.cycles[b.index] == parse_cycle("a-4b") && b.transport.size() == 1 &&
          w.cycles[b.transport[0].crossed] == parse_cycle("a-3b") && same_up_to_sign(b.result, cycle_b)) {
        gamma = true;
      }
    }
    n.require(gamma, "no witness transports a-4b across a-3b");
  });
  n.timed("normalized counts", 10, [&] {
    for (int k = 1; k <= 4; ++k) {
      FibrationWord w = normalize_cycles(log_mark(build_En(k, 0).word, cycle_b), k).word;
      auto count = brane_search(w, 0).witnesses.size();
      n.require(count == static_cast<std::size_t>(10 * k - 1), "normalized n=" + std::to_string(k) + " count is " +
                                                                    std::to_string(count));
    }
  });
}

void normalization(Notes& n) {
  n.timed("normalization", 300, [&] {
    for (int k : {2, 3}) {
      FibrationWord hat = log_mark(build_En(k, 0).word, cycle_b);
      auto norm = normalize_cycles(hat, k);
      n.require(replay(hat, norm.certificate) == norm.word, "certificate does not replay for n=" + std::to_string(k));
      n.require(sorted_multiset(norm.word) == normalized_family(k), "multiset differs for n=" + std::to_string(k));
    }
    std::vector<Cycle> two;
    for (const char* c : {"a+7b", "a+4b", "a", "a-4b", "a-7b"}) two.push_back(parse_cycle(c));
    two.insert(two.end(), 19, cycle_b);
    std::sort(two.begin(), two.end());
    n.require(normalized_family(2) == two, "n = 2 family differs from the expected list");
  });
}

void ledger(Notes& n) {
  for (long k = 1; k <= 5; ++k) {
    InvariantLedger e = ledger_E(static_cast<int>(k));
    InvariantLedger hat = apply(e, LedgerOp{LedgerOpKind::log_transform0, 0, std::nullopt});
    InvariantLedger down = apply(hat, LedgerOp{LedgerOpKind::blow_down, 10 * k - 1, std::nullopt});
    n.require(hat == InvariantLedger{12 * k, -8 * k, 2 * k - 1, 10 * k - 1, true}, "ledger of E^(n) differs");
    n.require(down == InvariantLedger{2 * k + 1, 2 * k - 1, 2 * k - 1, 0, true}, "blown-down ledger differs");
    n.require(e.consistent() && hat.consistent() && down.consistent(), "ledger is inconsistent");
  }
}

void kirby(Notes& n) {
  LinkingForm hopf(IntMatrix{{1, 1}, {1, 1}});
  n.require(slide(hopf, 1, 0, -1) == LinkingForm(IntMatrix{{1, 0}, {0, 0}}), "Hopf slide does not give diag(1, 0)");
  LinkingForm shadow(IntMatrix{{2, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 2}});
  std::vector<KirbyMove> step = {{"slide", 0, 1, -1}, {"slide", 3, 2, -1}, {"split", 0, 0, 1}, {"split", 3, 3, 1}};
  LinkingForm after = replay(shadow, step);
  n.require(after == LinkingForm(IntMatrix{{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}}),
            "induction step differs");
  auto flags = after.flags();
  n.require(flags[0].split && flags[3].split && after.q()[0][0] == 1 && after.q()[3][3] == 1,
            "induction step does not split two <1> summands");
  n.timed("slide invariance", 10, [&] {
    std::mt19937_64 rng(0x51de);
    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::uniform_int_distribution<long> entry(-3, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int t = 0; t < 500; ++t) {
      std::size_t d = size(rng);
      IntMatrix q(d, std::vector<long>(d, 0));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) q[i][j] = q[j][i] = entry(rng);
      LinkingForm f(q);
      std::uniform_int_distribution<std::size_t> idx(0, d - 1);
      std::size_t i = idx(rng), j = idx(rng);
      if (i == j) j = (i + 1) % d;
      n.require(invariants(slide(f, i, j, coin(rng) ? 1 : -1)) == invariants(f), "slide changed (det, sigma, rank)");
    }
  });
}

void determinism(Notes& n) {
  n.timed("full suite twice", 600, [&] {
    auto corpus = load_scenarios(GCV_SCENARIO_DIR);
    std::string reports[2];
    for (auto& report : reports) {
      std::vector<ScenarioResult> results;
      for (const auto& s : corpus) results.push_back(run_scenario(s));
      n.require(exit_code(results) == 0, "run all is not green");
      report = report_json(results).dump(2);
    }
    n.require(reports[0] == reports[1], "JSON reports differ between runs");
  });
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    void (*body)(Notes&);
  };
  const Criterion criteria[] = {
      {1, "identity suite", identities},
      {2, "type and parity", types},
      {3, "brane suite", brane_suite},
      {4, "Picard-Lefschetz anchor", picard_lefschetz},
      {5, "monodromy", monodromy},
      {6, "brane counts", brane_counts},
      {7, "cycle normalization", normalization},
      {8, "invariant ledger", ledger},
      {9, "Kirby shadows", kirby},
      {10, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Notes notes;
    auto t0 = Clock::now();
    try {
      c.body(notes);
    } catch (const std::exception& ex) {
      notes.items.push_back(std::string("exception: ") + ex.what());
    }
    double t = seconds_since(t0);
    bool ok = notes.items.empty();
    if (!ok) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.number, c.title, t);
    for (const auto& item : notes.items) std::printf("    %s\n", item.c_str());
  }
  return failed == 0 ? 0 : 1;
}
