#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gcv/dirac.hpp"

namespace gcv {

struct SExpr {
  bool atom = true;
  std::string text;
  std::vector<SExpr> items;

  bool is_list() const { return !atom; }
  bool is_symbol(std::string_view s) const { return atom && text == s; }
  /// Head symbol of a list, or "" for atoms and empty lists.
  const std::string& head() const;
  std::string str() const;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

SExpr parse_sexpr(std::string_view text);
std::vector<SExpr> parse_sexprs(std::string_view text);

using Value = std::variant<Form, GVec, Bivector>;

/// Named charts plus evaluation of expressions against them.
///
/// Expression grammar: numbers ("3", "-2/5"), (c re im), I, scalar symbols,
/// complex pair names and "<pair>bar", 1-form names (generators, "d<pair>",
/// "d<pair>bar", "d<var>"), (partial name), and the operators
/// + - * wedge / ^ conj d exp re im scalar.
class Context {
public:
  /// Registers a (chart NAME (coords ...) (complex ...) (constants ...) (units ...)).
  ChartPtr define_chart(const SExpr& decl);
  ChartPtr define_chart(std::string_view text) { return define_chart(parse_sexpr(text)); }
  void add_chart(ChartPtr chart);
  ChartPtr chart(const std::string& name) const;
  bool has_chart(const std::string& name) const { return charts_.count(name) != 0; }

  Value eval(const SExpr& expr, const ChartPtr& chart) const;
  Form eval_form(const SExpr& expr, const ChartPtr& chart) const;
  Form eval_form(std::string_view text, const ChartPtr& chart) const { return eval_form(parse_sexpr(text), chart); }
  Scalar eval_scalar(std::string_view text, const ChartPtr& chart) const;
  GVec eval_gvec(std::string_view text, const ChartPtr& chart) const;
  Bivector eval_bivector(std::string_view text, const ChartPtr& chart) const;

  /// Reads a printed (form (chart C) ...), (gvec ...) or (bivector ...).
  Value read(std::string_view text) const;

private:
  std::map<std::string, ChartPtr> charts_;
};

std::string print(const Gauss& c);
std::string print(const Scalar& s, const Chart& chart);
/// Body only, without the (form (chart C) ...) wrapper.
std::string print_body(const Form& f);
std::string print(const Form& f);
std::string print(const GVec& u);
std::string print(const Bivector& b);
std::string print(const Value& v);
std::string print_chart(const Chart& chart);

}  // namespace gcv
