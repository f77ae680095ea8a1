#include <doctest.h>

#include "gcv/sexpr.hpp"
#include "gcv/surgery.hpp"

using namespace gcv;

TEST_CASE("blow-up projections are holomorphic") {
  BlowupCharts b = build_blowup();
  auto report = verify_blowup_holomorphic(b);
  REQUIRE(report.charts.size() == 2);
  CHECK(report.ok());
  CHECK(report.charts[0].factor == "w");
  CHECK(report.charts[1].factor == "z");

  Context ctx;
  ctx.add_chart(b.chart1.chart());
  ctx.add_chart(b.chart2.chart());
  CHECK(substitute(b.base.rho, b.pi1) == ctx.eval_form("(+ w (* w dw dzt))", b.chart1.chart()));
  CHECK(substitute(b.base.rho, b.pi2) == ctx.eval_form("(+ (* wt z) (* z dwt dz))", b.chart2.chart()));

  // A wrong chart spinor is reported per chart.
  BlowupCharts broken = b;
  broken.chart2 = GCModel("chart2", ctx.eval_form("(+ z (wedge dwt dz))", b.chart2.chart()));
  auto bad = verify_blowup_holomorphic(broken);
  CHECK(bad.charts[0].ok);
  CHECK_FALSE(bad.charts[1].ok);
  CHECK(bad.charts[1].message.find("degree 0") != std::string::npos);
}

TEST_CASE("blow-up charts are pure and integrable") {
  BlowupCharts b = build_blowup();
  std::vector<Point> grid;
  for (int a : {-1, 0, 2}) {
    for (int c : {0, 1}) grid.push_back({{"xt", a}, {"yt", c}, {"u", c}, {"v", a}});
  }
  auto r2 = check_pure_nondegenerate(b.chart2, grid);
  CHECK(r2.ok());
  CHECK(r2.parity_constant());
  std::vector<Point> grid1;
  for (int a : {-1, 0, 2}) grid1.push_back({{"x", a}, {"y", 1}, {"ut", 0}, {"vt", a}});
  CHECK(check_pure_nondegenerate(b.chart1, grid1).ok());

  CHECK(exterior_d(b.chart1.rho).is_zero());
  CHECK(integrability_witness(b.chart1).witness.is_zero());
  Context ctx;
  ctx.add_chart(b.chart2.chart());
  CHECK(integrability_witness(b.chart2).witness == ctx.eval_gvec("(- (partial z))", b.chart2.chart()));
}

TEST_CASE("blow-down model") {
  BlowupCharts b = build_blowup();
  std::vector<Point> surface, chart2;
  for (int s : {-1, 0, 1}) {
    for (int t : {-1, 0, 2}) surface.push_back({{"s", s}, {"t", t}});
  }
  for (int u : {-1, 0, 3}) {
    for (int v : {0, 1}) {
      chart2.push_back({{"xt", 0}, {"yt", 0}, {"u", u}, {"v", v}});
      chart2.push_back({{"xt", 1}, {"yt", v}, {"u", u}, {"v", v}});
    }
  }
  auto report = verify_blowdown_model(b, exceptional_brane(b), surface, chart2);
  CHECK(report.ok);
  CHECK(report.normal_euler == -1);
  CHECK(report.complex_locus);
  CHECK(report.tau.points.size() == 9);

  BraneData shifted = exceptional_brane(b);
  shifted.f = Form::monomial(shifted.surface, Mask{3}, shifted.surface->constant(Gauss(1)));
  CHECK_FALSE(verify_blowdown_model(b, shifted, surface, chart2).ok);
  CHECK_THROWS_AS(verify_blowdown_model(b, shifted, {}, chart2), std::invalid_argument);
}

TEST_CASE("log transform data") {
  LogTransformData d = build_logtransform();
  Context ctx;
  ctx.add_chart(d.u0);
  ctx.add_chart(d.u1);
  CHECK(exterior_d(d.b01).is_zero());
  CHECK(exterior_d(d.omega).is_zero());
  CHECK(d.b01.component(Mask{0b0110}) == ctx.eval_scalar("(/ (* -1 A) (* 4 p))", d.u0));
  CHECK(d.b01.component(Mask{0b1001}) == ctx.eval_scalar("(* -1 r)", d.u0));
  CHECK(d.kappa == ctx.eval_scalar("(/ A (* 4 p))", d.u0));
  CHECK(d.exponent == ctx.eval_form("(* (/ A (* 4 p)) (+ (wedge lam dtt2) (* I (wedge lam dtt3)) (* I (wedge dtt1 dtt2))"
                                    " (* -1 (wedge dtt1 dtt3))))",
                                    d.u1));
  CHECK(d.rho1.unit == std::optional<std::string>("E"));
}

TEST_CASE("log transform gluing") {
  LogTransformData d = build_logtransform();
  auto r = verify_logtransform_gluing(d);
  CHECK(r.ok);
  CHECK(r.mismatches.empty());
  CHECK(r.prefactor_units);
  CHECK(r.cross_multiplied);
  CHECK(r.rules_consistent);
  Context ctx;
  ctx.add_chart(d.u0);
  CHECK(r.lhs == ctx.eval_form("(* I (+ (* r dr dth1) (* (/ A (* 4 p)) dth2 dth3)))", d.u0));
  CHECK(r.lhs.component(Mask{0b1100}) == ctx.eval_scalar("(* I (/ A (* 4 p)))", d.u0));
  CHECK(r.prefactor == ctx.eval_scalar("(* rt0 R F)", d.u0));

  // Dropping the angle permutation breaks the identity.
  LogTransformData wrong = d;
  wrong.phi.cobasis_rules.at("dtt1") = named_one_form(d.u0, "dth1");
  wrong.phi.cobasis_rules.at("dtt3") = named_one_form(d.u0, "dth2");
  auto bad = verify_logtransform_gluing(wrong);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.mismatches.empty());
  CHECK_FALSE(bad.cross_multiplied);

  // Inconsistent radial rule.
  LogTransformData radial = d;
  radial.phi.cobasis_rules.at("lam") = ctx.eval_form("(* 2 p (/ 1 A) r dr)", d.u0);
  CHECK_FALSE(verify_logtransform_gluing(radial).rules_consistent);
}

TEST_CASE("H class coefficient") {
  LogTransformData d = build_logtransform();
  Context ctx;
  ctx.add_chart(d.u0);
  Scalar k = ctx.eval_scalar("(/ A (* 4 p))", d.u0);
  auto h = h_class_coefficient(d);
  CHECK(h.coefficient == -k);
  CHECK(h.direction == "dth3");
  REQUIRE(h.pairings.size() == 3);
  CHECK(h.pairings[0].second.is_zero());
  CHECK(h.pairings[1].second.is_zero());
  CHECK(h_class_coefficient(d, -1).coefficient == k);
  CHECK_THROWS_AS(h_class_coefficient(d, 0), std::invalid_argument);
}
