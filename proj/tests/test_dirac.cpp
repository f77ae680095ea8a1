#include <doctest.h>

#include "gcv/dirac.hpp"
#include "gcv/sexpr.hpp"
#include "support.hpp"

using namespace gcv;

namespace {

struct Env {
  Context ctx;
  ChartPtr chart = testing::c2_chart();
  Env() { ctx.add_chart(chart); }
  Form f(std::string_view s) const { return ctx.eval_form(s, chart); }
  GVec u(std::string_view s) const { return ctx.eval_gvec(s, chart); }
  Bivector b(std::string_view s) const { return ctx.eval_bivector(s, chart); }
};

GVec random_gvec(testing::Gen& g, const ChartPtr& chart) {
  GVec u = GVec::zero(chart);
  for (auto& s : u.vec) s = g.small_scalar(chart->num_vars());
  for (auto& s : u.cov) s = g.small_scalar(chart->num_vars());
  return u;
}

Form small_form(testing::Gen& g, const ChartPtr& chart, int degree) {
  Form f(chart);
  Mask top = (Mask{1} << chart->dimension()) - 1;
  for (Mask m = 0; m <= top; ++m) {
    if (degree >= 0 && mask_degree(m) != degree) continue;
    if (g.integer(0, 2) == 0) continue;
    f.add(m, g.small_scalar(chart->num_vars()));
  }
  return f;
}

Bivector random_bivector(testing::Gen& g, const ChartPtr& chart) {
  Bivector b(chart);
  for (std::size_t i = 0; i < chart->dimension(); ++i) {
    for (std::size_t j = i + 1; j < chart->dimension(); ++j) {
      if (g.coin()) b.add(i, j, g.small_scalar(chart->num_vars()));
    }
  }
  return b;
}

}  // namespace

TEST_CASE("pairing and Clifford action examples") {
  Env e;
  CHECK(pairing(e.u("(partial x)"), e.u("dx")) == e.chart->constant(Gauss(mpq_class(1, 2))));
  CHECK(pairing(e.u("(partial w)"), e.u("dw")) == e.chart->constant(Gauss(mpq_class(1, 2))));
  CHECK(pairing(e.u("(partial w)"), e.u("dwbar")).is_zero());
  CHECK(clifford(e.u("(- (partial z))"), e.f("(+ w (wedge dw dz))")) == e.f("dw"));
  CHECK(clifford(e.u("dz"), e.f("(+ w (wedge dw dz))")) == e.f("(* w dz)"));
}

TEST_CASE("standard frame coordinates") {
  Env e;
  auto frame = standard_frame(e.chart);
  REQUIRE(frame.size() == 8);
  CHECK(frame[0].name == "(partial w)");
  CHECK(frame[5].name == "dwbar");
  for (std::size_t k = 0; k < frame.size(); ++k) {
    auto coords = frame_coordinates(frame[k].value);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      CHECK(coords[j] == e.chart->constant(Gauss(j == k ? 1 : 0)));
    }
  }
}

TEST_CASE("Courant bracket examples") {
  Env e;
  Form zero(e.chart);
  CHECK(courant(e.u("(partial x)"), e.u("(* x dy)"), zero) == e.u("dy"));
  CHECK(courant(e.u("(partial x)"), e.u("(partial y)"), e.f("(wedge dx dy du)")) == e.u("du"));
  CHECK_THROWS_WITH_AS(courant(e.u("(partial x)"), e.u("(partial y)"), e.f("(* x (wedge dy du dv))")),
                       "background 3-form is not closed (dH != 0)", std::invalid_argument);
}

TEST_CASE("Mukai pairing example") {
  Env e;
  Form rho = e.f("(+ w (wedge dw dz))");
  Form expected = e.f("(wedge dw dwbar dz dzbar)");
  CHECK(mukai(rho, rho.conj()) == expected);
  CHECK(expected == e.f("(* -4 (wedge dx dy du dv))"));
}

TEST_CASE("B and beta transform examples") {
  Env e;
  CHECK(b_transform(e.f("(* z (wedge dx dy))"), e.u("(partial x)")) == e.u("(- (partial x) (* z dy))"));
  Bivector beta = e.b("(* w (wedge (partial w) (partial z)))");
  CHECK(beta_transform(beta, e.f("(wedge dw dz)")) == e.f("(+ w (wedge dw dz))"));
  CHECK(beta_transform(e.b("(wedge (partial w) (partial z))"), e.f("(wedge dw dz)")) == e.f("(+ 1 (wedge dw dz))"));
  CHECK(beta_transform(beta, e.u("dz")) == e.u("(- dz (* w (partial w)))"));
}

TEST_CASE("Clifford relation") {
  testing::Gen g(0xd1a0c1);
  ChartPtr chart = testing::c2_chart();
  for (int trial = 0; trial < 25; ++trial) {
    GVec u = random_gvec(g, chart);
    GVec v = random_gvec(g, chart);
    Form rho = small_form(g, chart, -1);
    Form lhs = clifford(u, clifford(v, rho)) + clifford(v, clifford(u, rho));
    CHECK(lhs == rho.scaled(pairing(u, v).scaled(Gauss(2))));
  }
}

TEST_CASE("Courant bracket is skew and respects closed B-fields") {
  testing::Gen g(0xd1a0c2);
  ChartPtr chart = testing::c2_chart();
  for (int trial = 0; trial < 15; ++trial) {
    GVec u = random_gvec(g, chart);
    GVec v = random_gvec(g, chart);
    Form h = exterior_d(small_form(g, chart, 2));
    CHECK(courant(u, v, h) == -courant(v, u, h));
    Form b = exterior_d(small_form(g, chart, 1));
    CHECK(courant(b_transform(b, u), b_transform(b, v), h) == b_transform(b, courant(u, v, h)));
  }
}

TEST_CASE("transforms intertwine the Clifford action and preserve the Mukai pairing") {
  testing::Gen g(0xd1a0c3);
  ChartPtr chart = testing::c2_chart();
  for (int trial = 0; trial < 15; ++trial) {
    GVec u = random_gvec(g, chart);
    Form rho = small_form(g, chart, -1);
    Form sigma = small_form(g, chart, -1);
    Form b = small_form(g, chart, 2);
    Bivector beta = random_bivector(g, chart);
    CHECK(b_transform(b, clifford(u, rho)) == clifford(b_transform(b, u), b_transform(b, rho)));
    CHECK(beta_transform(beta, clifford(u, rho)) == clifford(beta_transform(beta, u), beta_transform(beta, rho)));
    CHECK(mukai(b_transform(b, rho), b_transform(b, sigma)) == mukai(rho, sigma));
    CHECK(mukai(beta_transform(beta, rho), beta_transform(beta, sigma)) == mukai(rho, sigma));
  }
}

TEST_CASE("B-field transforms the H bracket into the H + dB bracket") {
  Env e;
  Form b = e.f("(* z (wedge dx dy))");
  Form zero(e.chart);
  GVec x = e.u("(partial x)");
  GVec y = e.u("(partial y)");
  CHECK(courant(b_transform(b, x), b_transform(b, y), exterior_d(b)).is_zero());
  CHECK(b_transform(b, courant(x, y, zero)).is_zero());

  testing::Gen g(0xd1a0c4);
  for (int trial = 0; trial < 15; ++trial) {
    GVec u = random_gvec(g, e.chart);
    GVec v = random_gvec(g, e.chart);
    Form bb = small_form(g, e.chart, 2);
    CHECK(b_transform(bb, courant(u, v, zero)) == courant(b_transform(bb, u), b_transform(bb, v), exterior_d(bb)));
  }
}

TEST_CASE("Mukai pairing agrees with reversal then wedge") {
  testing::Gen g(0xd1a0c5);
  ChartPtr chart = testing::c2_chart();
  for (int trial = 0; trial < 20; ++trial) {
    Form rho = small_form(g, chart, -1);
    Form sigma = small_form(g, chart, -1);
    Form brute(chart);
    for (int k = 0; k <= 4; ++k) {
      Form rk = rho.part(k);
      if ((k * (k - 1) / 2) % 2 == 1) rk = -rk;
      brute += wedge(rk, sigma.part(4 - k));
    }
    CHECK(mukai(rho, sigma) == brute);
  }
}
