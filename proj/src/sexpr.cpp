#include "gcv/sexpr.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace gcv {

const std::string& SExpr::head() const {
  static const std::string empty;
  if (atom || items.empty() || !items.front().atom) return empty;
  return items.front().text;
}

std::string SExpr::str() const {
  if (atom) return text;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ' ';
    out += items[i].str();
  }
  return out + ")";
}

namespace {

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr next() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      ++pos_;
      SExpr list;
      list.atom = false;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(next());
      }
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    SExpr a;
    a.text = std::string(text_.substr(start, pos_ - start));
    return a;
  }

private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void bad(const SExpr& e, const std::string& what) {
  throw ParseError(what + ": " + e.str());
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
}

Gauss number(const SExpr& e) {
  try {
    return Gauss::parse_rational(e.text);
  } catch (const std::exception&) {
    bad(e, "malformed number");
  }
}

const Form& as_form(const Value& v, const SExpr& e) {
  if (auto f = std::get_if<Form>(&v)) return *f;
  bad(e, "expected a form");
}

Scalar as_scalar(const Value& v, const SExpr& e) {
  const Form& f = as_form(v, e);
  if (f.max_degree() > 0) bad(e, "expected a scalar");
  return f.scalar_part();
}

bool is_zero_form(const Value& v) {
  auto f = std::get_if<Form>(&v);
  return f != nullptr && f->is_zero();
}

/// 1-forms act as covectors next to generalized vectors.
std::optional<GVec> as_covector(const Value& v) {
  auto f = std::get_if<Form>(&v);
  if (f == nullptr || !f->is_homogeneous(1)) return std::nullopt;
  return GVec::from_covector(*f);
}

Value add_values(const Value& a, const Value& b, const SExpr& e) {
  if (is_zero_form(a)) return b;
  if (is_zero_form(b)) return a;
  if (std::holds_alternative<GVec>(a)) {
    if (auto cb = as_covector(b)) return std::get<GVec>(a) + *cb;
  }
  if (std::holds_alternative<GVec>(b)) {
    if (auto ca = as_covector(a)) return *ca + std::get<GVec>(b);
  }
  if (a.index() != b.index()) bad(e, "mixed operand kinds in sum");
  if (auto f = std::get_if<Form>(&a)) return *f + std::get<Form>(b);
  if (auto u = std::get_if<GVec>(&a)) return *u + std::get<GVec>(b);
  return std::get<Bivector>(a) + std::get<Bivector>(b);
}

Value negate(const Value& a) {
  if (auto f = std::get_if<Form>(&a)) return -*f;
  if (auto u = std::get_if<GVec>(&a)) return -*u;
  const auto& b = std::get<Bivector>(a);
  return b.scaled(b.chart()->constant(Gauss(-1)));
}

Value scale_value(const Value& a, const Scalar& s) {
  if (auto f = std::get_if<Form>(&a)) return f->scaled(s);
  if (auto u = std::get_if<GVec>(&a)) return u->scaled(s);
  return std::get<Bivector>(a).scaled(s);
}

Value multiply(const Value& a, const Value& b, const SExpr& e, bool wedge_vectors) {
  auto fa = std::get_if<Form>(&a);
  auto fb = std::get_if<Form>(&b);
  if (fa != nullptr && fb != nullptr) return wedge(*fa, *fb);
  if (fa != nullptr) return scale_value(b, as_scalar(a, e));
  if (fb != nullptr) return scale_value(a, as_scalar(b, e));
  auto ua = std::get_if<GVec>(&a);
  auto ub = std::get_if<GVec>(&b);
  if (wedge_vectors && ua != nullptr && ub != nullptr) return Bivector::wedge(*ua, *ub);
  bad(e, "unsupported product");
}

Value conj_value(const Value& a) {
  if (auto f = std::get_if<Form>(&a)) return f->conj();
  if (auto u = std::get_if<GVec>(&a)) return u->conj();
  return std::get<Bivector>(a).conj();
}

Form from_components(const ChartPtr& chart, const std::vector<Scalar>& comps) {
  Form f(chart);
  for (std::size_t k = 0; k < comps.size(); ++k) f.add(Mask{1} << k, comps[k]);
  return f;
}

std::string joined(const std::string& op, const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts.front();
  std::string out = "(" + op;
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string print_poly(const Poly& p, const Chart& chart) {
  if (p.is_zero()) return "0";
  const auto& names = chart.variable_names();
  std::vector<std::string> terms;
  for (const auto& [exps, c] : p.terms()) {
    std::vector<std::string> factors;
    for (std::size_t v = 0; v < exps.size(); ++v) {
      if (exps[v] == 0) continue;
      factors.push_back(exps[v] == 1 ? names[v] : "(^ " + names[v] + " " + std::to_string(exps[v]) + ")");
    }
    if (!c.is_one() || factors.empty()) factors.insert(factors.begin(), c.str());
    terms.push_back(joined("*", factors));
  }
  return joined("+", terms);
}

std::string coord_token(const Coordinate& c) {
  switch (c.kind) {
    case CoordKind::real:
      return c.generator == "d" + c.name ? c.name : "(" + c.name + " real " + c.generator + ")";
    case CoordKind::angle:
      return "(" + c.name + " angle " + c.generator + ")";
    case CoordKind::log:
      return "(" + c.name + " log " + c.generator + ")";
  }
  return c.name;
}

std::string term(const Scalar& coeff, const std::string& basis, const Chart& chart) {
  if (coeff.is_one()) return basis;
  return "(* " + print(coeff, chart) + " " + basis + ")";
}

template <class T>
T unwrap(const Value& v, const SExpr& e, const ChartPtr& chart) {
  if (auto t = std::get_if<T>(&v)) return *t;
  if constexpr (std::is_same_v<T, GVec>) {
    if (auto cv = as_covector(v)) return *cv;
  }
  if (is_zero_form(v)) {
    if constexpr (std::is_same_v<T, GVec>) {
      return GVec::zero(chart);
    } else if constexpr (std::is_same_v<T, Bivector>) {
      return Bivector(chart);
    }
  }
  bad(e, "value has the wrong kind");
}

}  // namespace

SExpr parse_sexpr(std::string_view text) {
  Reader r(text);
  SExpr e = r.next();
  if (!r.at_end()) throw ParseError("trailing input after expression");
  return e;
}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.next());
  return out;
}

ChartPtr Context::define_chart(const SExpr& decl) {
  if (decl.head() != "chart" || decl.items.size() < 2 || !decl.items[1].atom) {
    bad(decl, "expected (chart NAME ...)");
  }
  Chart::Builder builder(decl.items[1].text);
  std::vector<std::pair<std::string, SExpr>> dlogs;
  for (std::size_t i = 2; i < decl.items.size(); ++i) {
    const SExpr& section = decl.items[i];
    const std::string& kind = section.head();
    for (std::size_t j = 1; j < section.items.size(); ++j) {
      const SExpr& item = section.items[j];
      if (kind == "coords") {
        if (item.atom) {
          builder.coordinate(item.text);
          continue;
        }
        if (item.items.size() < 2 || item.items.size() > 3) bad(item, "malformed coordinate");
        const std::string& k = item.items[1].text;
        CoordKind ck = k == "real" ? CoordKind::real : k == "angle" ? CoordKind::angle
                     : k == "log" ? CoordKind::log : (bad(item, "unknown coordinate kind"), CoordKind::real);
        builder.coordinate(item.items[0].text, ck, item.items.size() == 3 ? item.items[2].text : "");
      } else if (kind == "complex") {
        if (item.atom || item.items.size() != 3) bad(item, "expected (name re im)");
        builder.complex_pair(item.items[0].text, item.items[1].text, item.items[2].text);
      } else if (kind == "constants") {
        if (!item.atom) bad(item, "expected a constant name");
        builder.constant(item.text);
      } else if (kind == "units") {
        if (item.atom) {
          builder.unit(item.text);
          continue;
        }
        std::string partner;
        for (std::size_t m = 1; m < item.items.size(); ++m) {
          const SExpr& opt = item.items[m];
          if (opt.head() == "conj" && opt.items.size() == 2) {
            partner = opt.items[1].text;
          } else if (opt.head() == "dlog" && opt.items.size() == 2) {
            dlogs.emplace_back(item.items[0].text, opt.items[1]);
          } else {
            bad(opt, "unknown unit option");
          }
        }
        builder.unit(item.items[0].text, partner);
      } else {
        bad(section, "unknown chart section");
      }
    }
  }
  ChartPtr chart;
  try {
    chart = builder.build();
    if (!dlogs.empty()) {
      for (const auto& [name, expr] : dlogs) {
        Form f = eval_form(expr, chart);
        if (!f.is_zero() && !f.is_homogeneous(1)) bad(expr, "d-log must be a 1-form");
        std::vector<Scalar> comps;
        for (std::size_t k = 0; k < chart->dimension(); ++k) comps.push_back(f.component(Mask{1} << k));
        builder.unit_dlog(name, comps);
      }
      chart = builder.build();
    }
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
  charts_[chart->name()] = chart;
  return chart;
}

void Context::add_chart(ChartPtr chart) { charts_[chart->name()] = std::move(chart); }

ChartPtr Context::chart(const std::string& name) const {
  auto it = charts_.find(name);
  if (it == charts_.end()) throw ParseError("unknown chart '" + name + "'");
  return it->second;
}

Value Context::eval(const SExpr& e, const ChartPtr& chart) const {
  if (e.atom) {
    const std::string& s = e.text;
    if (is_number(s)) return Form::constant(chart, number(e));
    if (s == "I") return Form::constant(chart, Gauss::imaginary_unit());
    if (chart->variable_index(s)) return Form::scalar(chart, chart->var(s));
    if (chart->complex_pair(s)) return Form::scalar(chart, chart->complex_value(s));
    if (s.size() > 3 && s.compare(s.size() - 3, 3, "bar") == 0) {
      std::string base = s.substr(0, s.size() - 3);
      if (chart->complex_pair(base)) return Form::scalar(chart, chart->conj(chart->complex_value(base)));
    }
    try {
      return named_one_form(chart, s);
    } catch (const std::invalid_argument&) {
      bad(e, "unknown symbol on chart " + chart->name());
    }
  }
  const std::string& op = e.head();
  if (op.empty()) bad(e, "expected an operator");
  std::size_t nargs = e.items.size() - 1;
  auto arg = [&](std::size_t i) { return eval(e.items[i], chart); };
  auto need = [&](std::size_t n) {
    if (nargs != n) bad(e, "'" + op + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (op == "c") {
    need(2);
    Gauss re = number(e.items[1]);
    Gauss im = number(e.items[2]);
    return Form::constant(chart, re + im * Gauss::imaginary_unit());
  }
  if (op == "partial") {
    need(1);
    if (!e.items[1].atom) bad(e, "expected a direction name");
    try {
      return GVec::partial(chart, e.items[1].text);
    } catch (const std::invalid_argument& err) {
      throw ParseError(err.what());
    }
  }
  if (op == "+") {
    Value acc = Form(chart);
    for (std::size_t i = 1; i <= nargs; ++i) acc = add_values(acc, arg(i), e);
    return acc;
  }
  if (op == "-") {
    if (nargs == 0) bad(e, "'-' needs an argument");
    Value acc = arg(1);
    if (nargs == 1) return negate(acc);
    for (std::size_t i = 2; i <= nargs; ++i) acc = add_values(acc, negate(arg(i)), e);
    return acc;
  }
  if (op == "*" || op == "wedge") {
    if (nargs == 0) return Form::constant(chart, Gauss(1));
    Value acc = arg(1);
    for (std::size_t i = 2; i <= nargs; ++i) acc = multiply(acc, arg(i), e, op == "wedge");
    return acc;
  }
  if (op == "/") {
    need(2);
    Scalar den = as_scalar(arg(2), e.items[2]);
    if (den.is_zero()) bad(e, "division by zero");
    return scale_value(arg(1), den.inverse());
  }
  if (op == "^") {
    need(2);
    Scalar base = as_scalar(arg(1), e.items[1]);
    if (!e.items[2].atom || !is_number(e.items[2].text) || e.items[2].text.find('/') != std::string::npos) {
      bad(e, "exponent must be an integer");
    }
    long k = std::stol(e.items[2].text);
    if (k < 0 && base.is_zero()) bad(e, "division by zero");
    return Form::scalar(chart, base.pow(k));
  }
  if (op == "scalar") {
    need(1);
    return Form::scalar(chart, as_scalar(arg(1), e.items[1]));
  }
  if (op == "conj") {
    need(1);
    return conj_value(arg(1));
  }
  if (op == "d") {
    need(1);
    try {
      return exterior_d(as_form(arg(1), e.items[1]));
    } catch (const std::invalid_argument& err) {
      throw ParseError(err.what());
    }
  }
  if (op == "exp") {
    need(1);
    try {
      return exp_form(as_form(arg(1), e.items[1]));
    } catch (const std::invalid_argument& err) {
      throw ParseError(err.what());
    }
  }
  if (op == "re" || op == "im") {
    need(1);
    Form f = as_form(arg(1), e.items[1]);
    Form c = f.conj();
    if (op == "re") return (f + c).scaled(Gauss(mpq_class(1, 2)));
    return (f - c).scaled(Gauss(0, mpq_class(-1, 2)));
  }
  bad(e, "unknown operator '" + op + "'");
}

Form Context::eval_form(const SExpr& expr, const ChartPtr& chart) const {
  return as_form(eval(expr, chart), expr);
}

Scalar Context::eval_scalar(std::string_view text, const ChartPtr& chart) const {
  SExpr e = parse_sexpr(text);
  return as_scalar(eval(e, chart), e);
}

GVec Context::eval_gvec(std::string_view text, const ChartPtr& chart) const {
  SExpr e = parse_sexpr(text);
  return unwrap<GVec>(eval(e, chart), e, chart);
}

Bivector Context::eval_bivector(std::string_view text, const ChartPtr& chart) const {
  SExpr e = parse_sexpr(text);
  return unwrap<Bivector>(eval(e, chart), e, chart);
}

Value Context::read(std::string_view text) const {
  SExpr e = parse_sexpr(text);
  const std::string& kind = e.head();
  if ((kind != "form" && kind != "gvec" && kind != "bivector") || e.items.size() != 3 ||
      e.items[1].head() != "chart" || e.items[1].items.size() != 2) {
    bad(e, "expected (form|gvec|bivector (chart NAME) body)");
  }
  ChartPtr c = chart(e.items[1].items[1].text);
  Value v = eval(e.items[2], c);
  if (kind == "form") return as_form(v, e);
  if (kind == "gvec") return unwrap<GVec>(v, e, c);
  return unwrap<Bivector>(v, e, c);
}

std::string print(const Gauss& c) { return c.str(); }

std::string print(const Scalar& s, const Chart& chart) {
  if (s.is_polynomial()) return print_poly(s.num(), chart);
  return "(/ " + print_poly(s.num(), chart) + " " + print_poly(s.den(), chart) + ")";
}

std::string print_body(const Form& f) {
  const Chart& chart = *f.chart();
  std::vector<std::string> terms;
  for (const auto& [mask, coeff] : f.components()) {
    if (mask == 0) {
      terms.push_back(print(coeff, chart));
      continue;
    }
    std::vector<std::string> gens;
    for (auto k : mask_indices(mask)) gens.push_back(chart.coordinates()[k].generator);
    terms.push_back(term(coeff, joined("wedge", gens), chart));
  }
  if (terms.empty()) return "0";
  return joined("+", terms);
}

std::string print(const Form& f) {
  return "(form (chart " + f.chart()->name() + ") " + print_body(f) + ")";
}

std::string print(const GVec& u) {
  const Chart& chart = *u.chart;
  std::vector<std::string> terms;
  for (std::size_t k = 0; k < u.vec.size(); ++k) {
    if (!u.vec[k].is_zero()) terms.push_back(term(u.vec[k], "(partial " + chart.coordinates()[k].name + ")", chart));
  }
  for (std::size_t k = 0; k < u.cov.size(); ++k) {
    if (!u.cov[k].is_zero()) terms.push_back(term(u.cov[k], chart.coordinates()[k].generator, chart));
  }
  std::string body = terms.empty() ? "0" : joined("+", terms);
  return "(gvec (chart " + chart.name() + ") " + body + ")";
}

std::string print(const Bivector& b) {
  const Chart& chart = *b.chart();
  std::vector<std::string> terms;
  for (const auto& [ij, coeff] : b.components()) {
    std::string basis = "(wedge (partial " + chart.coordinates()[ij.first].name + ") (partial " +
                        chart.coordinates()[ij.second].name + "))";
    terms.push_back(term(coeff, basis, chart));
  }
  std::string body = terms.empty() ? "0" : joined("+", terms);
  return "(bivector (chart " + chart.name() + ") " + body + ")";
}

std::string print(const Value& v) {
  return std::visit([](const auto& x) { return print(x); }, v);
}

std::string print_chart(const Chart& chart) {
  std::ostringstream out;
  out << "(chart " << chart.name() << " (coords";
  for (const auto& c : chart.coordinates()) out << " " << coord_token(c);
  out << ")";
  if (!chart.complex_pairs().empty()) {
    out << " (complex";
    for (const auto& p : chart.complex_pairs()) out << " (" << p.name << " " << p.re << " " << p.im << ")";
    out << ")";
  }
  if (!chart.constants().empty()) {
    out << " (constants";
    for (const auto& c : chart.constants()) out << " " << c;
    out << ")";
  }
  if (!chart.units().empty()) {
    // dlog bodies are printed against a chart sharing this layout.
    ChartPtr self(std::shared_ptr<const Chart>{}, &chart);
    out << " (units";
    for (const auto& u : chart.units()) {
      out << " (" << u.name << " (conj " << u.conjugate << ")";
      if (!u.dlog.empty()) out << " (dlog " << print_body(from_components(self, u.dlog)) << ")";
      out << ")";
    }
    out << ")";
  }
  out << ")";
  return out.str();
}

}  // namespace gcv
