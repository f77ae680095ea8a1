#include <doctest.h>

#include "gcv/gcs.hpp"
#include "gcv/sexpr.hpp"

using namespace gcv;

namespace {

Point pt(const mpq_class& x, const mpq_class& y, const mpq_class& u, const mpq_class& v) {
  return {{"x", x}, {"y", y}, {"u", u}, {"v", v}};
}

const std::vector<Point>& grid5() {
  static const std::vector<Point> g = {pt(0, 0, 0, 0), pt(1, 0, 0, 0), pt(0, 1, 1, 0), pt(-1, 2, 0, 1),
                                       pt(mpq_class(1, 2), -1, 2, -1)};
  return g;
}

struct Env {
  Context ctx;
  ChartPtr chart = models::c2_chart();
  Env() { ctx.add_chart(chart); }
  Form f(std::string_view s) const { return ctx.eval_form(s, chart); }
  GVec u(std::string_view s) const { return ctx.eval_gvec(s, chart); }
};

bool annihilates(const PointedEvaluation& ann, const GCModel& m, const GVec& u) {
  return clifford(u, evaluate_at(m.spinor(), ann.point)).is_zero();
}

}  // namespace

TEST_CASE("annihilator examples") {
  Env e;
  GCModel m = models::typechange_model(e.chart);
  auto origin = annihilator_at(m, pt(0, 0, 0, 0));
  CHECK(origin.dimension() == 4);
  for (const char* s : {"(partial wbar)", "(partial zbar)", "dw", "dz"}) CHECK(annihilates(origin, m, e.u(s)));
  auto one = annihilator_at(m, pt(1, 0, 0, 0));
  CHECK(one.dimension() == 4);
  CHECK(annihilates(one, m, e.u("(- (partial w) dz)")));

  GCModel sym = models::symplectic_model(e.chart);
  auto s = annihilator_at(sym, pt(2, -1, 0, 3));
  CHECK(s.dimension() == 4);
  CHECK(annihilates(s, sym, e.u("(- (partial x) (* I dy))")));
  CHECK(annihilates(s, sym, e.u("(+ (partial v) (* I du))")));

  for (const auto& ann : {origin, one, s}) {
    for (const auto& a : ann.basis) {
      for (const auto& b : ann.basis) CHECK(pairing(a, b).is_zero());
    }
  }
}

TEST_CASE("purity and nondegeneracy") {
  Env e;
  std::vector<Point> grid;
  for (int x : {-1, 0, 1}) {
    for (int u : {-1, 0, 1}) grid.push_back(pt(x, 0, u, 0));
  }
  auto report = check_pure_nondegenerate(models::typechange_model(e.chart), grid);
  CHECK(report.ok());
  for (const auto& c : report.points) {
    CHECK(c.orientation == 1);
    CHECK(c.pairing == Gauss(-4));
  }
  CHECK(report.parity_constant());

  // dw∧dz + dz∧dwbar = 2i dy∧dz is decomposable, so it fails on degeneracy.
  GCModel candidate("candidate", e.f("(+ (wedge dw dz) (wedge dz dwbar))"));
  auto degenerate = check_pure_nondegenerate(candidate, {pt(1, 2, 3, 4)});
  CHECK_FALSE(degenerate.ok());
  CHECK(degenerate.points[0].annihilator_dim == 4);
  CHECK(degenerate.first_failure().find("degenerate") != std::string::npos);
  GCModel impure("impure", e.f("(+ (wedge dx dy) (wedge du dv))"));
  auto bad = check_pure_nondegenerate(impure, {pt(1, 2, 3, 4)});
  CHECK_FALSE(bad.ok());
  CHECK(bad.points[0].annihilator_dim == 0);
  CHECK(bad.first_failure().find("not pure") != std::string::npos);

  auto cx = check_pure_nondegenerate(models::complex_model(e.chart), {pt(1, 2, 3, 4)});
  CHECK(cx.ok());
  CHECK(cx.points[0].type == 2);
  auto sym = check_pure_nondegenerate(models::symplectic_model(e.chart), grid5());
  CHECK(sym.ok());
  CHECK(sym.points[0].orientation == 1);
}

TEST_CASE("type and degeneracy order") {
  Env e;
  GCModel m = models::typechange_model(e.chart);
  CHECK(type_at(m, pt(0, 0, 5, -1)) == 2);
  CHECK(type_at(m, pt(1, 0, 0, 0)) == 0);
  CHECK(type_at(models::symplectic_model(e.chart), pt(1, 1, 1, 1)) == 0);
  Point along_x = {{"x", 1}};
  CHECK(degeneracy_order(m, pt(0, 0, 2, 0), along_x) == 1);
  CHECK(degeneracy_order(m, pt(1, 0, 2, 0), along_x) == 0);
  GCModel m2 = models::line_bundle_model(e.chart, 2);
  CHECK(degeneracy_order(m2, pt(0, 0, 2, 0), along_x) == 2);
  CHECK(degeneracy_order(m2, pt(0, 0, 0, 0), {{"y", 1}}) == 2);
  CHECK(type_at(m2, pt(0, 0, 1, 1)) == 2);
  CHECK_THROWS_AS(type_at(GCModel("pole", e.f("(+ (/ 1 x) (wedge dw dz))")), pt(0, 0, 0, 0)), std::domain_error);
}

TEST_CASE("integrability witnesses") {
  Env e;
  auto w = integrability_witness(models::typechange_model(e.chart));
  CHECK(w.witness == e.u("(- (partial z))"));
  CHECK(w.dimension == 4);
  auto s = integrability_witness(models::symplectic_model(e.chart));
  CHECK(s.witness.is_zero());
  auto order2 = integrability_witness(models::line_bundle_model(e.chart, 2));
  CHECK(order2.witness == e.u("(* -2 w (partial z))"));
  // Frozen regression value for the z̄ dw∧dz candidate.
  auto zbar = integrability_witness(GCModel("zbar", e.f("(* zbar dw dz)")));
  CHECK(zbar.witness == e.u("(/ dzbar zbar)"));
  CHECK(zbar.dimension == 4);
  CHECK_THROWS_AS(integrability_witness(GCModel("bad", e.f("(+ 1 (* y (wedge dx du)))"))), NotIntegrable);
}

TEST_CASE("beta models") {
  Env e;
  Form omega = e.f("(wedge dw dz)");
  CHECK(beta_model("b0", Bivector(e.chart), omega).rho == omega);
  CHECK(models::typechange_model(e.chart).rho == e.f("(+ w (wedge dw dz))"));
  GCModel m2 = models::line_bundle_model(e.chart, 2);
  CHECK(m2.rho == e.f("(+ (^ w 2) (wedge dw dz))"));
  Bivector beta = Bivector::wedge(GVec::partial(e.chart, "w"), GVec::partial(e.chart, "z"))
                      .scaled(e.chart->complex_value("w").pow(2));
  CHECK(m2.rho.part(0) == contract(beta, omega));
}

TEST_CASE("gluing") {
  for (bool oriented : {true, false}) {
    for (int a : {1, 2, 3}) {
      auto gl = models::divisor_gluing(a, oriented);
      auto r = verify_gluing(gl.lhs, gl.rhs, gl.map, gl.g, gl.b);
      CHECK(r.ok);
      const ChartPtr& u0 = gl.rhs.chart();
      Form dzdw = wedge(named_one_form(u0, "dz"), named_one_form(u0, "dw"));
      CHECK(r.pulled == (Form::constant(u0, Gauss(1)) + dzdw).scaled(gl.g));
      auto wrong = verify_gluing(gl.lhs, gl.rhs, gl.map, gl.g * gl.rhs.chart()->complex_value("z"), gl.b);
      CHECK_FALSE(wrong.ok);
      CHECK(wrong.mismatch_degree == 0);
    }
  }
  Env e;
  GCModel m = models::typechange_model(e.chart);
  SubstitutionRules id{e.chart, e.chart, {}, {}};
  CHECK(verify_gluing(m, m, id, e.chart->constant(Gauss(1)), Form(e.chart)).ok);
  CHECK_THROWS_AS(verify_gluing(m, m, id, e.chart->zero(), Form(e.chart)), std::invalid_argument);
  CHECK_THROWS_AS(verify_gluing(m, m, id, e.chart->constant(Gauss(1)), e.f("(* I (wedge dx dy))")),
                  std::invalid_argument);
}

TEST_CASE("bundled models are pure, nondegenerate and integrable") {
  Env e;
  std::vector<GCModel> list = {models::complex_model(e.chart), models::symplectic_model(e.chart),
                               models::typechange_model(e.chart), models::line_bundle_model(e.chart, 2)};
  for (bool oriented : {true, false}) {
    auto gl = models::divisor_gluing(2, oriented);
    list.push_back(gl.lhs);
    list.push_back(gl.rhs);
  }
  for (const auto& m : list) {
    CAPTURE(m.name);
    auto report = check_pure_nondegenerate(m, grid5());
    CHECK(report.ok());
    CHECK(report.parity_constant());
    CHECK_NOTHROW(integrability_witness(m));
  }
}
