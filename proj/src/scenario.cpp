#include "gcv/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "gcv/branes.hpp"
#include "gcv/gcs.hpp"
#include "gcv/lefschetz.hpp"
#include "gcv/sexpr.hpp"
#include "gcv/surgery.hpp"
#include "gcv/topo.hpp"

namespace gcv {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ScenarioError(msg); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing input '") + key + "'");
  return j.at(key);
}

std::string need_string(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) bad(std::string("input '") + key + "' must be a string");
  return v.get<std::string>();
}

long need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer()) bad(std::string("input '") + key + "' must be an integer");
  return v.get<long>();
}

bool flag(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) bad(std::string("input '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

mpq_class read_rational(const json& v) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (!v.is_string()) bad("coordinate values are integers or rational strings");
  mpq_class q;
  if (q.set_str(v.get<std::string>(), 10) != 0) bad("bad rational '" + v.get<std::string>() + "'");
  q.canonicalize();
  return q;
}

Point read_point(const json& j) {
  if (!j.is_object()) bad("a point is an object of coordinate values");
  Point p;
  for (const auto& [k, v] : j.items()) p[k] = read_rational(v);
  return p;
}

std::vector<Point> read_points(const json& j) {
  if (!j.is_array()) bad("point lists are arrays");
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(read_point(p));
  return out;
}

Cycle read_cycle(const json& j) {
  if (!j.is_string()) bad("cycles are strings such as \"a-3b\"");
  try {
    return parse_cycle(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
}

json cycle_list(const std::vector<Cycle>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(c.str());
  return out;
}

json mat_json(const Mat2& m) { return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})}); }

/// Charts available to a scenario, and the ones its outcome mentions.
class Env {
public:
  explicit Env(const json& inputs) {
    add(models::c2_chart("C2"));
    add(Chart::Builder("S").coordinate("s").coordinate("t").build());
    if (inputs.contains("charts")) {
      for (const auto& decl : inputs.at("charts")) {
        if (!decl.is_string()) bad("chart declarations are strings");
        ctx.define_chart(decl.get<std::string>());
      }
    }
  }

  void add(const ChartPtr& c) {
    if (!ctx.has_chart(c->name())) ctx.add_chart(c);
  }

  ChartPtr chart(const json& j, const char* key, const char* fallback = "C2") const {
    std::string name = j.contains(key) ? need_string(j, key) : std::string(fallback);
    if (!ctx.has_chart(name)) bad("unknown chart '" + name + "'");
    return ctx.chart(name);
  }

  Form form(const json& expr, const ChartPtr& c) const {
    if (!expr.is_string()) bad("expressions are strings");
    return ctx.eval_form(expr.get<std::string>(), c);
  }
  Scalar scalar(const json& expr, const ChartPtr& c) const {
    if (!expr.is_string()) bad("expressions are strings");
    return ctx.eval_scalar(expr.get<std::string>(), c);
  }
  Bivector bivector(const json& expr, const ChartPtr& c) const {
    if (!expr.is_string()) bad("expressions are strings");
    return ctx.eval_bivector(expr.get<std::string>(), c);
  }

  /// Records a chart printed in the outcome.
  std::string show(const Form& f) {
    used(f.chart());
    return print(f);
  }
  std::string show(const GVec& u) {
    used(u.chart);
    return print(u);
  }
  std::string show(const Bivector& b) {
    used(b.chart());
    return print(b);
  }
  std::string show(const Scalar& s, const ChartPtr& c) { return show(Form::scalar(c, s)); }

  json charts_json() const {
    json out = json::array();
    for (const auto& [name, decl] : used_) out.push_back(decl);
    return out;
  }

  Context ctx;

private:
  void used(const ChartPtr& c) { used_.emplace(c->name(), print_chart(*c)); }

  std::map<std::string, std::string> used_;
};

GCModel read_model(const Env& env, const json& j) {
  ChartPtr c = env.chart(j, "chart");
  std::string name = j.contains("name") ? need_string(j, "name") : std::string("model");
  std::optional<Form> h;
  if (j.contains("h")) h = env.form(j.at("h"), c);
  if (j.contains("beta")) {
    return beta_model(name, env.bivector(j.at("beta"), c), env.form(need(j, "omega"), c));
  }
  return GCModel(name, env.form(need(j, "rho"), c), h);
}

// ---- gcs ----

json run_model(Env& env, const json& in, const RunOptions&) {
  GCModel m = read_model(env, need(in, "model"));
  json out;
  out["rho"] = env.show(m.spinor());
  if (in.contains("grid")) {
    auto report = check_pure_nondegenerate(m, read_points(in.at("grid")));
    out["pure_nondegenerate"] = report.ok();
    out["parity_constant"] = report.parity_constant();
    json orient = json::array(), types = json::array();
    for (const auto& p : report.points) {
      orient.push_back(p.orientation);
      types.push_back(p.type);
    }
    out["orientations"] = orient;
    out["grid_types"] = types;
    out["first_failure"] = report.first_failure();
  }
  if (in.contains("type_points")) {
    json types = json::array();
    for (const auto& p : read_points(in.at("type_points"))) types.push_back(type_at(m, p));
    out["types"] = types;
  }
  if (flag(in, "integrability", false)) {
    try {
      auto w = integrability_witness(m);
      out["witness"] = env.show(w.witness);
      out["witness_dimension"] = w.dimension;
    } catch (const NotIntegrable& e) {
      out["witness"] = nullptr;
      out["integrability_failure"] = e.what();
    }
  }
  if (in.contains("degeneracy")) {
    const json& d = in.at("degeneracy");
    out["degeneracy_order"] = degeneracy_order(m, read_point(need(d, "point")), read_point(need(d, "direction")));
  }
  if (in.contains("annihilator")) {
    auto ev = annihilator_at(m, read_point(in.at("annihilator")));
    out["annihilator_dimension"] = ev.dimension();
  }
  return out;
}

Value eval_term(const Env& env, const json& t, const ChartPtr& c) {
  if (t.is_string()) return env.ctx.eval(parse_sexpr(t.get<std::string>()), c);
  std::string op = need_string(t, "op");
  const json& args = need(t, "args");
  if (!args.is_array()) bad("'args' must be an array");
  std::vector<Value> v;
  for (const auto& a : args) v.push_back(eval_term(env, a, c));
  auto form_arg = [&](std::size_t k) -> const Form& {
    if (k >= v.size() || !std::holds_alternative<Form>(v[k])) bad(op + ": argument " + std::to_string(k) + " must be a form");
    return std::get<Form>(v[k]);
  };
  if (op == "mukai") return mukai(form_arg(0), form_arg(1));
  if (op == "conj") return form_arg(0).conj();
  if (op == "b_transform") return b_transform(form_arg(0), form_arg(1));
  if (op == "beta_transform") {
    if (v.empty() || !std::holds_alternative<Bivector>(v[0])) bad("beta_transform: argument 0 must be a bivector");
    return beta_transform(std::get<Bivector>(v[0]), form_arg(1));
  }
  if (op == "clifford") {
    if (!v.empty() && std::holds_alternative<Form>(v[0])) v[0] = GVec::from_covector(std::get<Form>(v[0]));
    if (v.empty() || !std::holds_alternative<GVec>(v[0])) bad("clifford: argument 0 must be a generalized vector");
    return clifford(std::get<GVec>(v[0]), form_arg(1));
  }
  bad("unknown operation '" + op + "'");
}

std::string show_value(Env& env, const Value& v) {
  return std::visit([&](const auto& x) { return env.show(x); }, v);
}

json run_identity(Env& env, const json& in, const RunOptions&) {
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    ChartPtr chart = env.chart(c, "chart");
    Value lhs = eval_term(env, need(c, "lhs"), chart);
    Value rhs = eval_term(env, need(c, "rhs"), chart);
    cases.push_back({{"label", need_string(c, "label")}, {"lhs", show_value(env, lhs)}, {"equal", lhs == rhs}});
  }
  return {{"cases", cases}};
}

json run_gluing(Env& env, const json& in, const RunOptions&) {
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    int a = static_cast<int>(need_int(c, "order"));
    bool oriented = flag(c, "oriented", true);
    auto g = models::divisor_gluing(a, oriented);
    auto r = verify_gluing(g.lhs, g.rhs, g.map, g.g, g.b);
    cases.push_back({{"order", a},
                     {"oriented", oriented},
                     {"ok", r.ok},
                     {"pulled", env.show(r.pulled)},
                     {"expected", env.show(r.expected)},
                     {"message", r.message}});
  }
  return {{"cases", cases}};
}

// ---- branes ----

BraneData read_brane(const Env& env, const json& c) {
  ChartPtr s = env.chart(c, "surface", "S");
  BraneData b{s, {}, env.form(need(c, "f"), s)};
  for (const auto& [k, v] : need(c, "parametrization").items()) b.parametrization.emplace(k, env.scalar(v, s));
  return b;
}

json run_tau(Env& env, const json& in, const RunOptions&) {
  GCModel m = read_model(env, need(in, "model"));
  auto grid = read_points(need(in, "grid"));
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    auto r = tau_invariance_at(m, read_brane(env, c), grid);
    json dims = json::array();
    for (const auto& p : r.points) dims.push_back(p.intersection);
    cases.push_back({{"label", need_string(c, "label")}, {"ok", r.ok()}, {"dimensions", dims},
                     {"first_failure", r.first_failure()}});
  }
  return {{"cases", cases}};
}

json run_f_extension(Env& env, const json& in, const RunOptions&) {
  ChartPtr s = env.chart(in, "surface", "S");
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    auto r = f_extension(s, env.scalar(need(c, "u"), s), env.scalar(need(c, "v"), s));
    json f = r.f ? json(env.show(*r.f, s)) : json(nullptr);
    cases.push_back({{"label", need_string(c, "label")}, {"lagrangian", r.lagrangian}, {"f", f}, {"message", r.message}});
  }
  return {{"cases", cases}};
}

json run_tau0(Env& env, const json& in, const RunOptions&) {
  ChartPtr c2 = env.chart(in, "chart");
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    std::vector<std::string> normal;
    for (const auto& n : need(c, "normal")) normal.push_back(n.get<std::string>());
    auto r = tau0_preserved(env.bivector(need(c, "beta"), c2), normal);
    cases.push_back({{"label", need_string(c, "label")}, {"ok", r.ok}, {"details", r.details}});
  }
  return {{"cases", cases}};
}

json run_normal_euler(Env&, const json& in, const RunOptions&) {
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    BraneTopology t{flag(c, "orientable", true), static_cast<int>(need_int(c, "genus")),
                    static_cast<int>(need_int(c, "n")), static_cast<int>(c.value("k", 0L))};
    cases.push_back({{"label", need_string(c, "label")},
                     {"euler_characteristic", t.euler_characteristic()},
                     {"normal_euler", normal_euler(t)}});
  }
  return {{"cases", cases}};
}

// ---- surgery ----

json run_blowup(Env& env, const json& in, const RunOptions&) {
  BlowupCharts b = build_blowup();
  json out;
  out["base"] = env.show(b.base.rho);
  out["chart1"] = env.show(b.chart1.rho);
  out["chart2"] = env.show(b.chart2.rho);
  out["pullback1"] = env.show(substitute(b.base.rho, b.pi1));
  out["pullback2"] = env.show(substitute(b.base.rho, b.pi2));
  json checks = json::array();
  auto report = verify_blowup_holomorphic(b);
  for (const auto& c : report.charts) checks.push_back({{"chart", c.chart}, {"factor", c.factor}, {"ok", c.ok}});
  out["holomorphic"] = checks;
  if (in.contains("blowdown")) {
    const json& d = in.at("blowdown");
    auto r = verify_blowdown_model(b, exceptional_brane(b), read_points(need(d, "surface_grid")),
                                   read_points(need(d, "chart2_grid")));
    json dims = json::array();
    for (const auto& p : r.tau.points) dims.push_back(p.intersection);
    out["blowdown"] = {{"ok", r.ok},
                       {"tau_dimensions", dims},
                       {"normal_euler", r.normal_euler},
                       {"complex_locus", r.complex_locus},
                       {"details", r.details}};
  }
  return out;
}

json run_logtransform(Env& env, const json& in, const RunOptions&) {
  LogTransformData d = build_logtransform();
  json out;
  if (flag(in, "gluing", true)) {
    auto r = verify_logtransform_gluing(d);
    out["ok"] = r.ok;
    out["lhs"] = env.show(r.lhs);
    out["rhs"] = env.show(r.rhs);
    out["mismatches"] = r.mismatches;
    out["prefactor"] = env.show(r.prefactor, d.u0);
    out["prefactor_units"] = r.prefactor_units;
    out["cross_multiplied"] = r.cross_multiplied;
    out["rules_consistent"] = r.rules_consistent;
  }
  if (in.contains("orientations")) {
    json classes = json::array();
    for (const auto& o : in.at("orientations")) {
      HClass h = h_class_coefficient(d, o.get<int>());
      classes.push_back({{"orientation", o}, {"coefficient", env.show(h.coefficient, d.u0)}, {"direction", h.direction}});
    }
    out["h_class"] = classes;
  }
  return out;
}

// ---- lefschetz ----

int pinned_budget(const json& in, const RunOptions& opts) {
  return opts.budget ? *opts.budget : static_cast<int>(need_int(in, "budget"));
}

FibrationWord read_word(const json& j) {
  if (j.contains("family")) {
    std::string family = need_string(j, "family");
    int n = static_cast<int>(need_int(j, "n"));
    int cb = static_cast<int>(need_int(j, "certificate_budget"));
    if (n < 1) bad("n must be at least 1");
    FibrationWord e = build_En(n, cb).word;
    if (family == "E") return e;
    FibrationWord hat = log_mark(e, cycle_b);
    if (family == "Ehat") return hat;
    if (family == "Ehat_normalized") return normalize_cycles(hat, n).word;
    bad("unknown word family '" + family + "'");
  }
  FibrationWord w;
  for (const auto& c : need(j, "cycles")) w.cycles.push_back(read_cycle(c));
  if (j.contains("boundary")) {
    w.base = Base::disk;
    w.boundary = read_cycle(j.at("boundary"));
  }
  return w;
}

json run_twist(Env&, const json& in, const RunOptions&) {
  json cases = json::array();
  for (const auto& c : need(in, "cases")) {
    Cycle v = read_cycle(need(c, "v")), x = read_cycle(need(c, "c"));
    int d = static_cast<int>(need_int(c, "direction"));
    cases.push_back({{"v", v.str()}, {"c", x.str()}, {"direction", d}, {"result", twist(v, x, d).str()}});
  }
  json out{{"cases", cases}};
  if (in.contains("exhaustive_bound")) {
    long k = need_int(in, "exhaustive_bound");
    long checked = 0, broken = 0;
    for (long p1 = -k; p1 <= k; ++p1)
      for (long q1 = -k; q1 <= k; ++q1)
        for (long p2 = -k; p2 <= k; ++p2)
          for (long q2 = -k; q2 <= k; ++q2)
            for (long p3 = -k; p3 <= k; ++p3)
              for (long q3 = -k; q3 <= k; ++q3) {
                Cycle v{p1, q1}, c{p2, q2}, e{p3, q3};
                for (int d : {-1, 1}) {
                  ++checked;
                  if (intersection(twist(v, c, d), twist(v, e, d)) != intersection(c, e)) ++broken;
                }
              }
    out["pairing_checks"] = checked;
    out["pairing_preserved"] = broken == 0;
  }
  return out;
}

json run_monodromy(Env&, const json& in, const RunOptions& opts) {
  FibrationWord w = read_word(need(in, "word"));
  int budget = pinned_budget(in, opts);
  json out;
  out["budget"] = budget;
  out["cycles"] = cycle_list(w.cycles);
  out["monodromy"] = mat_json(total_monodromy(w));
  auto cert = identity_certificate(w, budget);
  out["certificate_found"] = cert.has_value();
  if (cert) {
    json moves = json::array();
    for (const auto& m : cert->moves) moves.push_back(json::array({m.index, m.direction}));
    out["certificate"] = {{"moves", moves}, {"basis", mat_json(cert->basis)}};
    out["certified_monodromy"] = mat_json(total_monodromy(replay(w, *cert)));
  }
  if (in.contains("hurwitz_invariance")) {
    const json& h = in.at("hurwitz_invariance");
    std::mt19937_64 rng(static_cast<std::uint64_t>(need_int(h, "seed")));
    long words = need_int(h, "words");
    std::uniform_int_distribution<long> entry(-4, 4);
    std::uniform_int_distribution<int> len(2, 12), coin(0, 1);
    long preserved = 0;
    for (long t = 0; t < words; ++t) {
      FibrationWord r;
      int n = len(rng);
      for (int k = 0; k < n; ++k) {
        Cycle c{entry(rng), entry(rng)};
        if (c == Cycle{}) c = cycle_b;
        r.cycles.push_back(c);
      }
      std::uniform_int_distribution<std::size_t> idx(0, r.size() - 2);
      FibrationWord moved = hurwitz_move(r, idx(rng), coin(rng) ? 1 : -1);
      if (total_monodromy(moved) == total_monodromy(r)) ++preserved;
    }
    out["hurwitz_words"] = words;
    out["hurwitz_preserved"] = preserved;
  }
  return out;
}

json witness_json(const FibrationWord& w, const BraneWitness& b) {
  json transport = json::array();
  for (const auto& c : b.transport) transport.push_back(json::array({c.crossed, c.direction}));
  return {{"index", b.index}, {"cycle", w.cycles[b.index].str()}, {"transport", transport}, {"result", b.result.str()}};
}

json run_branes(Env&, const json& in, const RunOptions& opts, std::vector<std::pair<std::string, std::string>>& dot,
                const std::string& id) {
  FibrationWord w = read_word(need(in, "word"));
  int budget = pinned_budget(in, opts);
  auto search = brane_search(w, budget);
  json out;
  out["budget"] = budget;
  out["cycles"] = cycle_list(w.cycles);
  out["boundary"] = w.boundary ? json(w.boundary->str()) : json(nullptr);
  out["count"] = search.witnesses.size();
  out["exhausted"] = search.exhausted;
  json wits = json::array();
  for (const auto& b : search.witnesses) wits.push_back(witness_json(w, b));
  out["witnesses"] = wits;
  auto rec = blow_down_word(w, search.witnesses);
  out["blow_down"] = {{"count", rec.count},
                      {"self_intersections", rec.self_intersections},
                      {"delta_chi", rec.delta_chi},
                      {"delta_sigma", rec.delta_sigma},
                      {"delta_b2_minus", rec.delta_b2_minus}};
  dot.emplace_back(id, to_dot(w, search.witnesses));
  return out;
}

std::string multiset_text(const std::vector<Cycle>& sorted) {
  std::vector<Cycle> rest;
  long bs = 0;
  for (const auto& c : sorted) {
    if (c == cycle_b) {
      ++bs;
    } else {
      rest.push_back(c);
    }
  }
  std::sort(rest.begin(), rest.end(), [](const Cycle& x, const Cycle& y) {
    return x.p != y.p ? x.p < y.p : x.q > y.q;
  });
  std::string out = "{";
  for (const auto& c : rest) out += (out.size() > 1 ? ", " : "") + c.str();
  if (bs > 0) out += (out.size() > 1 ? ", " : "") + std::string("b×") + std::to_string(bs);
  return out + "}";
}

json run_normalization(Env&, const json& in, const RunOptions&, std::vector<std::pair<std::string, std::string>>& dot,
                       const std::string& id) {
  int n = static_cast<int>(need_int(in, "n"));
  int cb = static_cast<int>(need_int(in, "certificate_budget"));
  auto max_moves = static_cast<std::size_t>(need_int(in, "max_moves"));
  FibrationWord hat = log_mark(build_En(n, cb).word, cycle_b);
  Normalization norm = normalize_cycles(hat, n, max_moves);
  auto ms = sorted_multiset(norm.word);
  json out;
  out["multiset"] = multiset_text(ms);
  out["matches_family"] = ms == normalized_family(n);
  out["length"] = norm.word.size();
  out["moves"] = norm.certificate.moves.size();
  out["gamma_moves"] = norm.gamma_moves.size();
  out["basis"] = mat_json(norm.certificate.basis);
  out["replayed"] = replay(hat, norm.certificate) == norm.word;
  out["monodromy"] = mat_json(total_monodromy(norm.word));
  dot.emplace_back(id, to_dot(norm.word));
  return out;
}

// ---- topo ----

json run_ledger(Env&, const json& in, const RunOptions&) {
  json rows = json::array();
  bool consistent = true;
  for (const auto& nj : need(in, "n")) {
    int n = nj.get<int>();
    InvariantLedger e = ledger_E(n);
    InvariantLedger hat = apply(e, LedgerOp{LedgerOpKind::log_transform0, 0, std::nullopt});
    InvariantLedger down = apply(hat, LedgerOp{LedgerOpKind::blow_down, 10L * n - 1, std::nullopt});
    consistent = consistent && e.consistent() && hat.consistent() && down.consistent();
    rows.push_back({{"n", n}, {"fibration", to_json(e)}, {"log_transform", to_json(hat)}, {"blown_down", to_json(down)}});
  }
  json out{{"rows", rows}};
  if (in.contains("lefschetz_check")) {
    const json& lc = in.at("lefschetz_check");
    int budget = static_cast<int>(need_int(lc, "budget"));
    int cb = static_cast<int>(need_int(lc, "certificate_budget"));
    auto max_moves = static_cast<std::size_t>(need_int(lc, "max_moves"));
    json checks = json::array();
    for (const auto& nj : need(lc, "n")) {
      int n = nj.get<int>();
      FibrationWord hat = log_mark(build_En(n, cb).word, cycle_b);
      FibrationWord norm = normalize_cycles(hat, n, max_moves).word;
      auto rec = blow_down_word(norm, brane_search(norm, budget).witnesses);
      InvariantLedger after = apply(ledger_E(n), rec);
      consistent = consistent && after.consistent();
      checks.push_back({{"n", n}, {"witnesses", rec.count}, {"blown_down", to_json(after)}});
    }
    out["lefschetz_check"] = checks;
  }
  out["consistent"] = consistent;
  return out;
}

json invariants_json(const LinkingForm& f) {
  auto inv = invariants(f);
  return {{"det", inv.det}, {"signature", inv.signature}, {"rank", inv.rank}};
}

json run_kirby(Env&, const json& in, const RunOptions&) {
  auto [form, moves] = linking_from_json(in);
  json out;
  out["invariants"] = invariants_json(form);
  LinkingForm after = replay(form, moves);
  out["after_moves"] = after.q();
  out["invariants_after_moves"] = invariants_json(after);
  json flags = json::array();
  for (const auto& fl : after.flags()) flags.push_back({{"split", fl.split}, {"cancellable", fl.cancellable}});
  out["flags_after_moves"] = flags;
  if (flag(in, "reduce", false)) {
    auto r = reduce_definite(after, static_cast<std::size_t>(need_int(in, "max_moves")));
    out["reduction"] = to_json(r.form, r.transcript);
    out["reduction"]["stalled"] = r.stalled;
    out["reduction"]["diagonal"] = r.form.is_diagonal();
    out["reduction"]["invariants"] = invariants_json(r.form);
  }
  if (in.contains("blow_down")) {
    LinkingForm f = after;
    for (const auto& i : in.at("blow_down")) f = blow_down_index(f, i.get<std::size_t>());
    out["after_blow_down"] = f.q();
  }
  return out;
}

json run_slide_invariance(Env&, const json& in, const RunOptions&) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(need_int(in, "seed")));
  long trials = need_int(in, "matrices");
  auto max_size = static_cast<std::size_t>(need_int(in, "max_size"));
  std::uniform_int_distribution<std::size_t> size(2, max_size);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  long preserved = 0;
  for (long t = 0; t < trials; ++t) {
    std::size_t n = size(rng);
    IntMatrix q(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) q[i][j] = q[j][i] = entry(rng);
    LinkingForm f(q);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) j = (i + 1) % n;
    if (invariants(slide(f, i, j, coin(rng) ? 1 : -1)) == invariants(f)) ++preserved;
  }
  return {{"matrices", trials}, {"preserved", preserved}};
}

using Handler = std::function<json(Env&, const json&, const RunOptions&, ScenarioResult&)>;

template <typename F>
Handler plain(F f) {
  return [f](Env& env, const json& in, const RunOptions& o, ScenarioResult&) { return f(env, in, o); };
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"model", plain(run_model)},
      {"identity", plain(run_identity)},
      {"gluing", plain(run_gluing)},
      {"tau_invariance", plain(run_tau)},
      {"f_extension", plain(run_f_extension)},
      {"tau0", plain(run_tau0)},
      {"normal_euler", plain(run_normal_euler)},
      {"blowup", plain(run_blowup)},
      {"logtransform", plain(run_logtransform)},
      {"twist", plain(run_twist)},
      {"monodromy", plain(run_monodromy)},
      {"branes",
       [](Env& e, const json& in, const RunOptions& o, ScenarioResult& r) { return run_branes(e, in, o, r.dot, r.id); }},
      {"normalization",
       [](Env& e, const json& in, const RunOptions& o, ScenarioResult& r) {
         return run_normalization(e, in, o, r.dot, r.id);
       }},
      {"ledger", plain(run_ledger)},
      {"kirby", plain(run_kirby)},
      {"slide_invariance", plain(run_slide_invariance)},
  };
  return table;
}

bool is_printed_value(const std::string& s) {
  return s.rfind("(form ", 0) == 0 || s.rfind("(gvec ", 0) == 0 || s.rfind("(bivector ", 0) == 0;
}

ChartPtr chart_of(const Value& v) {
  return std::visit(
      [](const auto& x) -> ChartPtr {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, GVec>) {
          return x.chart;
        } else {
          return x.chart();
        }
      },
      v);
}

bool same_value(const Context& ctx, const std::string& expected, const std::string& got) {
  try {
    Value g = ctx.read(got);
    Value e = is_printed_value(expected) ? ctx.read(expected) : ctx.eval(parse_sexpr(expected), chart_of(g));
    if (std::holds_alternative<GVec>(g) && std::holds_alternative<Form>(e) && std::get<Form>(e).part(1) == std::get<Form>(e)) {
      e = GVec::from_covector(std::get<Form>(e));
    }
    if (e.index() != g.index()) {
      bool zero_e = std::holds_alternative<Form>(e) && std::get<Form>(e).is_zero();
      bool zero_g = std::visit([](const auto& x) { return x.is_zero(); }, g);
      return zero_e && zero_g;
    }
    return e == g;
  } catch (const std::exception&) {
    return false;
  }
}

void compare_into(const Context& ctx, const json& e, const json& o, const std::string& path,
                  std::vector<std::string>& out) {
  auto differ = [&]() { out.push_back(path + ": expected " + e.dump() + ", got " + o.dump()); };
  if (e.is_object() && e.size() == 1 && e.contains("$contains")) {
    if (!o.is_array()) return differ();
    for (const auto& item : e.at("$contains")) {
      bool found = std::any_of(o.begin(), o.end(), [&](const json& x) {
        std::vector<std::string> sub;
        compare_into(ctx, item, x, path, sub);
        return sub.empty();
      });
      if (!found) out.push_back(path + ": no element matches " + item.dump());
    }
    return;
  }
  if (e.is_object()) {
    if (!o.is_object()) return differ();
    for (const auto& [k, v] : e.items()) {
      std::string sub = path.empty() ? k : path + "." + k;
      if (!o.contains(k)) {
        out.push_back(sub + ": missing from outcome");
        continue;
      }
      compare_into(ctx, v, o.at(k), sub, out);
    }
    return;
  }
  if (e.is_array()) {
    if (!o.is_array() || o.size() != e.size()) return differ();
    for (std::size_t i = 0; i < e.size(); ++i) compare_into(ctx, e[i], o[i], path + "[" + std::to_string(i) + "]", out);
    return;
  }
  if (e == o) return;
  if (e.is_string() && o.is_string() && is_printed_value(o.get<std::string>()) &&
      same_value(ctx, e.get<std::string>(), o.get<std::string>())) {
    return;
  }
  differ();
}

}  // namespace

Scenario parse_scenario(const json& j, const std::string& source) {
  auto where = [&](const std::string& msg) { return ScenarioError((source.empty() ? "" : source + ": ") + msg); };
  if (!j.is_object()) throw where("scenario must be an object");
  for (const char* key : {"id", "kind", "inputs", "expected"}) {
    if (!j.contains(key)) throw where(std::string("missing '") + key + "'");
  }
  Scenario s;
  if (!j.at("id").is_string() || !j.at("kind").is_string()) throw where("'id' and 'kind' must be strings");
  s.id = j.at("id").get<std::string>();
  s.kind = j.at("kind").get<std::string>();
  if (s.id.empty()) throw where("empty id");
  if (!handlers().count(s.kind)) throw where("unknown kind '" + s.kind + "'");
  if (j.contains("tags")) {
    if (!j.at("tags").is_array()) throw where("'tags' must be an array");
    for (const auto& t : j.at("tags")) {
      if (!t.is_string()) throw where("tags are strings");
      s.tags.push_back(t.get<std::string>());
    }
  }
  s.inputs = j.at("inputs");
  s.expected = j.at("expected");
  if (!s.inputs.is_object() || !s.expected.is_object()) throw where("'inputs' and 'expected' must be objects");
  s.source = source;
  return s;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ScenarioError("scenario directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::vector<Scenario> out;
  std::set<std::string> ids;
  for (const auto& path : files) {
    std::ifstream in(path);
    json j = json::parse(in, nullptr, false);
    std::string name = path.filename().string();
    if (j.is_discarded()) throw ScenarioError(name + ": invalid JSON");
    Scenario s = parse_scenario(j, name);
    if (!ids.insert(s.id).second) throw ScenarioError(name + ": duplicate id '" + s.id + "'");
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
  return out;
}

std::vector<std::string> scenario_kinds() {
  std::vector<std::string> out;
  for (const auto& [k, h] : handlers()) out.push_back(k);
  return out;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::error:
      return "error";
  }
  return "error";
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts) {
  ScenarioResult r;
  r.id = s.id;
  r.kind = s.kind;
  r.tags = s.tags;
  auto it = handlers().find(s.kind);
  if (it == handlers().end()) {
    r.parse_error = true;
    r.message = "unknown kind '" + s.kind + "'";
    return r;
  }
  try {
    Env env(s.inputs);
    r.outcome = it->second(env, s.inputs, opts, r);
    json charts = env.charts_json();
    if (!charts.empty()) r.outcome["charts"] = charts;
  } catch (const ScenarioError& e) {
    r.parse_error = true;
    r.message = e.what();
    return r;
  } catch (const ParseError& e) {
    r.parse_error = true;
    r.message = std::string("expression: ") + e.what();
    return r;
  } catch (const json::exception& e) {
    r.parse_error = true;
    r.message = std::string("inputs: ") + e.what();
    return r;
  } catch (const std::exception& e) {
    r.message = e.what();
    return r;
  }
  r.mismatches = compare_outcome(s.expected, r.outcome);
  r.status = r.mismatches.empty() ? Status::pass : Status::fail;
  return r;
}

std::vector<std::string> compare_outcome(const json& expected, const json& outcome) {
  Context ctx;
  if (outcome.is_object() && outcome.contains("charts")) {
    for (const auto& decl : outcome.at("charts")) {
      try {
        ctx.define_chart(decl.get<std::string>());
      } catch (const std::exception&) {
        // Unreadable declarations only disable value comparison.
      }
    }
  }
  std::vector<std::string> out;
  compare_into(ctx, expected, outcome, "", out);
  return out;
}

json report_json(const std::vector<ScenarioResult>& results) {
  json list = json::array();
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.status == Status::pass) ++passed;
    json item{{"id", r.id},
              {"kind", r.kind},
              {"tags", r.tags},
              {"status", to_string(r.status)},
              {"outcome", r.outcome},
              {"mismatches", r.mismatches}};
    if (!r.message.empty()) item["message"] = r.message;
    list.push_back(item);
  }
  return {{"scenarios", list},
          {"summary", {{"total", results.size()}, {"passed", passed}, {"failed", results.size() - passed}}}};
}

namespace {

std::string show_json(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string report_text(const std::vector<ScenarioResult>& results) {
  std::ostringstream out;
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.status == Status::pass) ++passed;
    std::string status = to_string(r.status);
    std::transform(status.begin(), status.end(), status.begin(), ::toupper);
    out << status << "  " << r.id << "  [" << r.kind << "]\n";
    if (!r.message.empty()) out << "    error: " << r.message << "\n";
    for (const auto& m : r.mismatches) out << "    mismatch: " << m << "\n";
    if (r.outcome.is_object()) {
      for (const auto& [k, v] : r.outcome.items()) {
        if (k == "charts") continue;
        out << "    " << k << ": " << show_json(v) << "\n";
      }
    }
  }
  out << passed << "/" << results.size() << " scenarios passed\n";
  return out.str();
}

int exit_code(const std::vector<ScenarioResult>& results) {
  int code = 0;
  for (const auto& r : results) {
    if (r.parse_error) return 2;
    if (r.status != Status::pass) code = 1;
  }
  return code;
}

}  // namespace gcv
