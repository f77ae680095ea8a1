#include "gcv/surgery.hpp"

#include "gcv/sexpr.hpp"

namespace gcv {

namespace {

ChartPtr blowup_chart(const std::string& name, const std::string& w, const std::string& z) {
  return Chart::Builder(name)
      .coordinate(w == "w" ? "x" : "xt").coordinate(w == "w" ? "y" : "yt")
      .coordinate(z == "z" ? "u" : "ut").coordinate(z == "z" ? "v" : "vt")
      .complex_pair(w, w == "w" ? "x" : "xt", w == "w" ? "y" : "yt")
      .complex_pair(z, z == "z" ? "u" : "ut", z == "z" ? "v" : "vt")
      .build();
}

Form chart_rho(const ChartPtr& c, const Scalar& scalar, const std::string& w, const std::string& z) {
  return Form::scalar(c, scalar) + wedge(named_one_form(c, "d" + w), named_one_form(c, "d" + z));
}

}  // namespace

BlowupCharts build_blowup() {
  ChartPtr base = models::c2_chart("C2");
  ChartPtr c1 = blowup_chart("Bl1", "w", "zt");
  ChartPtr c2 = blowup_chart("Bl2", "wt", "z");
  SubstitutionRules pi1{base, c1, {{"z", c1->complex_value("w") * c1->complex_value("zt")}}, {}};
  SubstitutionRules pi2{base, c2, {{"w", c2->complex_value("wt") * c2->complex_value("z")}}, {}};
  return BlowupCharts{GCModel("base", chart_rho(base, base->complex_value("w"), "w", "z")),
                      GCModel("chart1", chart_rho(c1, c1->constant(Gauss(1)), "w", "zt")),
                      GCModel("chart2", chart_rho(c2, c2->complex_value("wt"), "wt", "z")), std::move(pi1),
                      std::move(pi2)};
}

bool BlowupReport::ok() const {
  for (const auto& c : charts) {
    if (!c.ok) return false;
  }
  return !charts.empty();
}

BlowupReport verify_blowup_holomorphic(const BlowupCharts& b) {
  BlowupReport report;
  auto check = [&](const GCModel& chart, const SubstitutionRules& pi, const std::string& factor) {
    ChartCheck c{chart.chart()->name(), factor, false, ""};
    auto r = verify_gluing(b.base, chart, pi, chart.chart()->complex_value(factor), Form(chart.chart()));
    c.ok = r.ok;
    if (!r.ok) c.message = "pullback is not " + factor + " times the chart spinor: " + r.message;
    report.charts.push_back(std::move(c));
  };
  check(b.chart1, b.pi1, "w");
  check(b.chart2, b.pi2, "z");
  return report;
}

BraneData exceptional_brane(const BlowupCharts&) {
  ChartPtr surface = Chart::Builder("E").coordinate("s").coordinate("t").build();
  std::map<std::string, Scalar> param = {{"x", surface->zero()},
                                         {"y", surface->zero()},
                                         {"ut", surface->var("s")},
                                         {"vt", surface->var("t")}};
  return BraneData{surface, std::move(param), Form(surface)};
}

BlowdownReport verify_blowdown_model(const BlowupCharts& b, const BraneData& brane, const std::vector<Point>& surface,
                                     const std::vector<Point>& chart2) {
  if (surface.empty() || chart2.empty()) throw std::invalid_argument("blow-down check needs sample points");
  BlowdownReport report;
  report.tau = tau_invariance_at(b.chart1, brane, surface);
  report.details.push_back(report.tau.ok() ? "exceptional sphere is a brane with F = 0"
                                           : "exceptional sphere: " + report.tau.first_failure());
  report.normal_euler = normal_euler(BraneTopology{true, 0, 1, 1});
  report.details.push_back("normal Euler number " + std::to_string(report.normal_euler));

  report.complex_locus = true;
  for (const auto& p : chart2) {
    auto coord = [&](const char* name) {
      auto it = p.find(name);
      return it == p.end() ? mpq_class(0) : it->second;
    };
    int expected = coord("xt") == 0 && coord("yt") == 0 ? 2 : 0;
    if (type_at(b.chart2, p) != expected) {
      report.complex_locus = false;
      report.details.push_back("chart 2 type mismatch at " + format_point(p));
    }
  }
  report.details.push_back(report.complex_locus ? "chart 2 has type 2 exactly along wt = 0"
                                                : "chart 2 type does not match the locus wt = 0");
  report.ok = report.tau.ok() && report.normal_euler == -1 && report.complex_locus;
  return report;
}

LogTransformData build_logtransform() {
  Context ctx;
  ChartPtr u0 = ctx.define_chart(
      "(chart U0 (coords r (th1 angle) (th2 angle) (th3 angle)) (constants A p rt0)"
      " (units (R (dlog (* 4 p (/ 1 A) r dr))) (F (conj Fbar) (dlog (* I dth2)))"
      " (Fbar (conj F) (dlog (* -1 I dth2)))))");
  ChartPtr u1 = ctx.define_chart(
      "(chart U1 (coords (rt log lam) (tt1 angle) (tt2 angle) (tt3 angle)) (constants A p)"
      " (units (E (conj Ebar) (dlog (* I dtt1))) (Ebar (conj E) (dlog (* -1 I dtt1)))))");
  Form omega = ctx.eval_form("(+ (* r dr dth1) (* A (/ 1 (* 4 p)) dth2 dth3))", u0);
  Form exponent = ctx.eval_form("(* A (/ 1 (* 4 p)) (wedge (+ lam (* I dtt1)) (+ dtt2 (* I dtt3))))", u1);
  Form b01 = ctx.eval_form("(- (* -1 r dr dth3) (* A (/ 1 (* 4 p)) dth1 dth2))", u0);
  Form rho1 = (Form::constant(u1, Gauss(1)) + exponent).scaled(u1->var("rt"));
  SubstitutionRules phi{u1,
                        u0,
                        {{"rt", u0->var("rt0") * u0->var("R")}, {"E", u0->var("F")}, {"Ebar", u0->var("Fbar")}},
                        {{"lam", ctx.eval_form("(* 4 p (/ 1 A) r dr)", u0)},
                         {"dtt1", named_one_form(u0, "dth2")},
                         {"dtt2", named_one_form(u0, "dth3")},
                         {"dtt3", named_one_form(u0, "dth1")}}};
  Scalar kappa = ctx.eval_scalar("(/ A (* 4 p))", u0);
  GCModel m0("rho0", exp_form(omega.scaled(Gauss::imaginary_unit())));
  GCModel m1("rho1", rho1, std::nullopt, "E");
  if (!exterior_d(b01).is_zero() || !exterior_d(omega).is_zero()) {
    throw std::logic_error("log transform data is not closed");
  }
  return LogTransformData{u0, u1, omega, std::move(m0), std::move(m1), exponent, b01, std::move(phi), kappa};
}

LogGluingReport verify_logtransform_gluing(const LogTransformData& d) {
  const ChartPtr& u0 = d.u0;
  LogGluingReport report{false, d.b01 + substitute(d.exponent, d.phi), d.omega.scaled(Gauss::imaginary_unit()),
                         {}, u0->zero(), false, false, false};
  Form diff = report.lhs - report.rhs;
  for (const auto& [m, s] : diff.components()) {
    std::string gens;
    for (auto k : mask_indices(m)) gens += (gens.empty() ? "" : "^") + u0->coordinates()[k].generator;
    report.mismatches.push_back(gens + ": " + print(report.lhs.component(m), *u0) + " vs " +
                                print(report.rhs.component(m), *u0));
  }

  Form unit_part = Form::scalar(d.u1, d.u1->var("rt") * d.u1->var("E"));
  report.prefactor = substitute(unit_part, d.phi).scalar_part();
  report.prefactor_units = !report.prefactor.is_zero();
  for (std::size_t v = 0; v < u0->num_vars(); ++v) {
    bool allowed = u0->variable_kind(v) == VarKind::unit || u0->variable_names()[v] == "rt0";
    if (!allowed && !report.prefactor.derivative(v).is_zero()) report.prefactor_units = false;
  }

  Form pulled = substitute(d.rho1.spinor(), d.phi);
  report.cross_multiplied =
      wedge(exp_form(d.b01), pulled) == d.rho0.spinor().scaled(report.prefactor);

  report.rules_consistent = true;
  SubstitutionRules derived{d.phi.source, d.phi.target, d.phi.scalar_rules, {}};
  for (const auto& [name, image] : d.phi.cobasis_rules) {
    auto k = d.u1->generator_index(name);
    if (d.u1->coordinates()[*k].kind == CoordKind::angle) continue;
    if (substitute(Form::generator(d.u1, *k), derived) != image) report.rules_consistent = false;
  }
  report.ok = report.mismatches.empty() && report.prefactor_units && report.cross_multiplied &&
              report.rules_consistent;
  return report;
}

HClass h_class_coefficient(const LogTransformData& d, int orientation) {
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be 1 or -1");
  const ChartPtr& u0 = d.u0;
  std::size_t r = *u0->coordinate_index("r");
  Form on_torus(u0);
  for (const auto& [m, s] : d.b01.components()) {
    if (!(m & (Mask{1} << r))) on_torus.add(m, s);
  }
  Form volume = wedge(wedge(named_one_form(u0, "dth1"), named_one_form(u0, "dth2")), named_one_form(u0, "dth3"));
  Mask vol_mask = volume.components().begin()->first;
  Scalar vol_sign = volume.components().begin()->second;
  HClass out;
  for (const std::string name : {"dth1", "dth2", "dth3"}) {
    Form xi = named_one_form(u0, name);
    if (name == "dth3") xi = xi.scaled(Gauss(orientation));
    out.pairings.emplace_back(name, wedge(on_torus, xi).component(vol_mask) / vol_sign);
  }
  out.coefficient = out.pairings[2].second;
  out.direction = "dth3";
  return out;
}

}  // namespace gcv
