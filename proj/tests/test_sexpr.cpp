#include <doctest.h>

#include "gcv/sexpr.hpp"
#include "support.hpp"

using namespace gcv;

namespace {

const char* kLogChart =
    "(chart T (coords (r log lam) (t1 angle) (t2 angle dphi) s)"
    " (constants A p)"
    " (units (U (conj V) (dlog (* 2 lam))) (V (conj U) (dlog (* 2 lam)))))";

}  // namespace

TEST_CASE("reader") {
  SExpr e = parse_sexpr("  (+ x ; comment\n (* 3/4 y))");
  CHECK(e.head() == "+");
  CHECK(e.str() == "(+ x (* 3/4 y))");
  CHECK(parse_sexprs("a (b) c").size() == 3);
  CHECK_THROWS_AS(parse_sexpr("(+ x"), ParseError);
  CHECK_THROWS_AS(parse_sexpr("x)"), ParseError);
  CHECK_THROWS_AS(parse_sexpr(""), ParseError);
}

TEST_CASE("evaluation and errors") {
  Context ctx;
  ChartPtr c = testing::c2_chart();
  ctx.add_chart(c);
  Form f = ctx.eval_form("(+ w (wedge dw dz))", c);
  CHECK(f.scalar_part() == c->complex_value("w"));
  CHECK(ctx.eval_scalar("(* w wbar)", c) == ctx.eval_scalar("(+ (^ x 2) (^ y 2))", c));
  CHECK(ctx.eval_scalar("(/ 1 (^ x -1))", c) == c->var("x"));
  CHECK(ctx.eval_scalar("(re (* I w))", c) == -c->var("y"));
  CHECK(ctx.eval_scalar("(c 1/2 -3)", c) == c->constant(Gauss(mpq_class(1, 2), -3)));
  CHECK_THROWS_AS(ctx.eval_form("(+ q 1)", c), ParseError);
  CHECK_THROWS_AS(ctx.eval_form("(frob x)", c), ParseError);
  CHECK_THROWS_AS(ctx.eval_form("(/ 1 (- x x))", c), ParseError);
  CHECK_THROWS_AS(ctx.eval_form("(^ dx 2)", c), ParseError);
  CHECK_THROWS_AS(ctx.eval_form("(partial x)", c), ParseError);
}

TEST_CASE("canonical printing") {
  Context ctx;
  ChartPtr c = testing::c2_chart();
  ctx.add_chart(c);
  CHECK(print(ctx.eval_form("(+ (* x dx dy) 1)", c)) == "(form (chart C2) (+ 1 (* x (wedge dx dy))))");
  CHECK(print(ctx.eval_form("(/ dx (+ 1 x))", c)) == "(form (chart C2) (* (/ 1 (+ x 1)) dx))");
  CHECK(print(ctx.eval_form("(* I (^ y 2) du)", c)) == "(form (chart C2) (* (* (c 0 1) (^ y 2)) du))");
  CHECK(print(Form(c)) == "(form (chart C2) 0)");
  CHECK(print(ctx.eval_gvec("(+ (partial w) dz)", c)) ==
        "(gvec (chart C2) (+ (* 1/2 (partial x)) (* (c 0 -1/2) (partial y)) du (* (c 0 1) dv)))");
}

TEST_CASE("chart declarations round-trip") {
  Context ctx;
  ChartPtr t = ctx.define_chart(kLogChart);
  CHECK(t->dimension() == 4);
  CHECK(t->num_vars() == 6);
  Context other;
  ChartPtr again = other.define_chart(print_chart(*t));
  CHECK(again->same_as(*t));
  CHECK(print_chart(*again) == print_chart(*t));
  CHECK(ctx.eval_form("(d U)", t) == ctx.eval_form("(* 2 U lam)", t));
  CHECK(ctx.eval_form("(d r)", t) == ctx.eval_form("(* r lam)", t));
  CHECK_THROWS_AS(ctx.define_chart("(chart B (coords x x))"), ParseError);
}

TEST_CASE("printed forms read back to the same value") {
  testing::Gen g(0x5e4e01);
  Context ctx;
  ChartPtr c = testing::c2_chart();
  ctx.add_chart(c);
  ChartPtr t = ctx.define_chart(kLogChart);
  for (int trial = 0; trial < 40; ++trial) {
    const ChartPtr& chart = trial % 2 == 0 ? c : t;
    Form f = g.form(chart, -1, g.coin());
    std::string text = print(f);
    Value back = ctx.read(text);
    REQUIRE(std::holds_alternative<Form>(back));
    CHECK(std::get<Form>(back) == f);
    CHECK(print(back) == text);
  }
}
