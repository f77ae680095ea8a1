#include "gcv/form.hpp"

#include <bit>
#include <stdexcept>

namespace gcv {

int mask_degree(Mask m) { return std::popcount(m); }

std::vector<std::size_t> mask_indices(Mask m) {
  std::vector<std::size_t> out;
  while (m != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

bool MaskLess::operator()(Mask a, Mask b) const {
  int da = std::popcount(a);
  int db = std::popcount(b);
  if (da != db) return da < db;
  if (a == b) return false;
  Mask diff = a ^ b;
  Mask low = diff & (~diff + 1);
  return (a & low) != 0;
}

int insertion_sign(Mask m, std::size_t k) {
  Mask below = m & ((Mask{1} << k) - 1);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

int wedge_sign(Mask a, Mask b) {
  if ((a & b) != 0) return 0;
  int swaps = 0;
  for (auto j : mask_indices(b)) {
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 == 0 ? 1 : -1;
}

static Mask bit(std::size_t k) { return Mask{1} << k; }

Form Form::scalar(ChartPtr chart, Scalar s) {
  Form f(std::move(chart));
  f.add(0, s);
  return f;
}

Form Form::constant(ChartPtr chart, const Gauss& c) {
  Scalar s = chart->constant(c);
  return scalar(std::move(chart), std::move(s));
}

Form Form::generator(ChartPtr chart, std::size_t k) {
  if (k >= chart->dimension()) throw std::out_of_range("cobasis index out of range");
  Scalar one = chart->constant(Gauss(1));
  return monomial(std::move(chart), bit(k), std::move(one));
}

Form Form::monomial(ChartPtr chart, Mask mask, Scalar s) {
  Form f(std::move(chart));
  f.add(mask, s);
  return f;
}

Scalar Form::component(Mask m) const {
  auto it = components_.find(m);
  return it == components_.end() ? chart_->zero() : it->second;
}

Form Form::part(int k) const {
  Form out(chart_);
  for (const auto& [m, s] : components_) {
    if (mask_degree(m) == k) out.components_.emplace(m, s);
  }
  return out;
}

int Form::min_degree() const {
  return components_.empty() ? -1 : mask_degree(components_.begin()->first);
}

int Form::max_degree() const {
  return components_.empty() ? -1 : mask_degree(components_.rbegin()->first);
}

bool Form::is_homogeneous(int k) const {
  for (const auto& [m, s] : components_) {
    if (mask_degree(m) != k) return false;
  }
  return true;
}

bool Form::is_even() const {
  for (const auto& [m, s] : components_) {
    if (mask_degree(m) % 2 != 0) return false;
  }
  return true;
}

void Form::add(Mask m, const Scalar& s) {
  if (s.is_zero()) return;
  if (s.nvars() != chart_->num_vars()) throw std::invalid_argument("coefficient arity does not match chart " + chart_->name());
  if (m >> chart_->dimension() != 0) throw std::out_of_range("cobasis mask exceeds chart dimension");
  auto [it, inserted] = components_.try_emplace(m, s);
  if (!inserted) {
    it->second += s;
    if (it->second.is_zero()) components_.erase(it);
  }
}

Form& Form::operator+=(const Form& other) {
  require_same_chart(*chart_, *other.chart_);
  for (const auto& [m, s] : other.components_) add(m, s);
  return *this;
}

Form& Form::operator-=(const Form& other) {
  require_same_chart(*chart_, *other.chart_);
  for (const auto& [m, s] : other.components_) add(m, -s);
  return *this;
}

Form Form::operator-() const { return scaled(Gauss(-1)); }

Form Form::scaled(const Scalar& s) const {
  Form out(chart_);
  if (s.is_zero()) return out;
  for (const auto& [m, c] : components_) out.add(m, c * s);
  return out;
}

Form Form::scaled(const Gauss& c) const {
  Form out(chart_);
  if (c.is_zero()) return out;
  for (const auto& [m, s] : components_) out.components_.emplace(m, s.scaled(c));
  return out;
}

Form Form::conj() const {
  Form out(chart_);
  for (const auto& [m, s] : components_) out.components_.emplace(m, chart_->conj(s));
  return out;
}

Form Form::reversed() const {
  Form out(chart_);
  for (const auto& [m, s] : components_) {
    int k = mask_degree(m);
    bool flip = (k * (k - 1) / 2) % 2 != 0;
    out.components_.emplace(m, flip ? -s : s);
  }
  return out;
}

bool operator==(const Form& a, const Form& b) {
  return a.chart_->same_as(*b.chart_) && a.components_ == b.components_;
}

Form wedge(const Form& a, const Form& b) {
  require_same_chart(*a.chart(), *b.chart());
  Form out(a.chart());
  for (const auto& [ma, sa] : a.components()) {
    for (const auto& [mb, sb] : b.components()) {
      int sign = wedge_sign(ma, mb);
      if (sign == 0) continue;
      Scalar c = sa * sb;
      out.add(ma | mb, sign > 0 ? c : -c);
    }
  }
  return out;
}

Form differential(const ChartPtr& chart, const Scalar& s) {
  Form out(chart);
  for (std::size_t v = 0; v < chart->num_vars(); ++v) {
    if (!s.num().contains(v) && !s.den().contains(v)) continue;
    auto dv = chart->variable_differential(v);
    if (!dv) {
      throw std::invalid_argument("underived auxiliary symbol '" + chart->variable_names()[v] + "'");
    }
    Scalar partial = s.derivative(v);
    for (std::size_t k = 0; k < dv->size(); ++k) {
      if ((*dv)[k].is_zero()) continue;
      out.add(bit(k), partial * (*dv)[k]);
    }
  }
  return out;
}

Form exterior_d(const Form& a) {
  Form out(a.chart());
  for (const auto& [m, s] : a.components()) {
    if (s.is_constant()) continue;
    Form ds = differential(a.chart(), s);
    for (const auto& [k1, c] : ds.components()) {
      auto k = static_cast<std::size_t>(std::countr_zero(k1));
      if ((m & k1) != 0) continue;
      out.add(m | k1, insertion_sign(m, k) > 0 ? c : -c);
    }
  }
  return out;
}

Form contract(const std::vector<Scalar>& vec, const Form& a) {
  const auto& chart = a.chart();
  if (vec.size() != chart->dimension()) throw std::invalid_argument("vector has wrong number of frame components");
  Form out(chart);
  for (const auto& [m, s] : a.components()) {
    int sign = 1;
    for (auto k : mask_indices(m)) {
      if (!vec[k].is_zero()) {
        Scalar c = vec[k] * s;
        out.add(m & ~bit(k), sign > 0 ? c : -c);
      }
      sign = -sign;
    }
  }
  return out;
}

Form exp_form(const Form& a) {
  if (!a.is_even()) throw std::invalid_argument("exponential of a form with odd components");
  if (!a.scalar_part().is_zero()) throw std::invalid_argument("exponential needs a form without scalar part");
  Form result = Form::constant(a.chart(), Gauss(1));
  Form term = result;
  for (long k = 1; !term.is_zero(); ++k) {
    term = wedge(term, a).scaled(Gauss(mpq_class(1, k)));
    result += term;
  }
  return result;
}

Form named_one_form(const ChartPtr& chart, const std::string& name) {
  if (auto k = chart->generator_index(name)) return Form::generator(chart, *k);
  for (const auto& p : chart->complex_pairs()) {
    bool plain = name == "d" + p.name;
    bool bar = name == "d" + p.name + "bar";
    if (!plain && !bar) continue;
    Form re = Form::generator(chart, *chart->coordinate_index(p.re));
    Form im = Form::generator(chart, *chart->coordinate_index(p.im));
    Gauss i = Gauss::imaginary_unit();
    return re + im.scaled(bar ? -i : i);
  }
  if (name.size() > 1 && name[0] == 'd') {
    std::string base = name.substr(1);
    if (auto v = chart->variable_index(base)) {
      return differential(chart, Scalar::variable(chart->num_vars(), *v));
    }
  }
  throw std::invalid_argument("unknown 1-form '" + name + "' on chart " + chart->name());
}

Scalar real_part(const Chart& chart, const Scalar& s) {
  return (s + chart.conj(s)).scaled(Gauss(mpq_class(1, 2)));
}

Scalar imag_part(const Chart& chart, const Scalar& s) {
  return (s - chart.conj(s)).scaled(Gauss(0, mpq_class(-1, 2)));
}

namespace {

bool occurs(const Scalar& s, std::size_t v) { return s.num().contains(v) || s.den().contains(v); }

struct ResolvedRules {
  std::vector<std::optional<Scalar>> scalars;
  std::vector<std::optional<Form>> generators;
};

ResolvedRules resolve(const SubstitutionRules& rules) {
  const Chart& src = *rules.source;
  const ChartPtr& tgt = rules.target;
  ResolvedRules r;
  r.scalars.resize(src.num_vars());
  r.generators.resize(src.dimension());

  std::map<std::string, Scalar> expanded;
  for (const auto& [name, image] : rules.scalar_rules) {
    if (image.nvars() != tgt->num_vars()) throw std::invalid_argument("rule for " + name + " is not on the target chart");
    if (const ComplexPair* p = src.complex_pair(name)) {
      expanded.insert_or_assign(p->re, real_part(*tgt, image));
      expanded.insert_or_assign(p->im, imag_part(*tgt, image));
    } else if (src.variable_index(name)) {
      expanded.insert_or_assign(name, image);
    } else {
      throw std::invalid_argument("rule for unknown source symbol '" + name + "'");
    }
  }
  for (std::size_t v = 0; v < src.num_vars(); ++v) {
    const std::string& name = src.variable_names()[v];
    if (auto it = expanded.find(name); it != expanded.end()) {
      r.scalars[v] = it->second;
    } else if (auto tv = tgt->variable_index(name)) {
      r.scalars[v] = Scalar::variable(tgt->num_vars(), *tv);
    }
  }

  for (const auto& [name, image] : rules.cobasis_rules) {
    auto k = src.generator_index(name);
    if (!k) throw std::invalid_argument("cobasis rule for unknown generator '" + name + "'");
    require_same_chart(*image.chart(), *tgt);
    if (!image.is_homogeneous(1)) throw std::invalid_argument("cobasis rule for " + name + " is not a 1-form");
    r.generators[*k] = image;
  }
  for (std::size_t k = 0; k < src.dimension(); ++k) {
    if (r.generators[k]) continue;
    const Coordinate& c = src.coordinates()[k];
    if (c.kind != CoordKind::angle) {
      std::size_t v = *src.variable_of_coordinate(k);
      if (!r.scalars[v]) continue;
      Form d = differential(tgt, *r.scalars[v]);
      if (c.kind == CoordKind::log) d = d.scaled(r.scalars[v]->inverse());
      r.generators[k] = d;
    } else if (auto tk = tgt->generator_index(c.generator)) {
      r.generators[k] = Form::generator(tgt, *tk);
    }
  }
  return r;
}

}  // namespace

Form substitute(const Form& a, const SubstitutionRules& rules) {
  require_same_chart(*a.chart(), *rules.source);
  ResolvedRules r = resolve(rules);
  const Chart& src = *rules.source;
  const ChartPtr& tgt = rules.target;

  std::vector<Scalar> images(src.num_vars(), tgt->zero());
  for (const auto& [m, s] : a.components()) {
    for (std::size_t v = 0; v < src.num_vars(); ++v) {
      if (occurs(s, v) && !r.scalars[v]) {
        throw std::invalid_argument("uncovered symbol '" + src.variable_names()[v] + "'");
      }
    }
    for (auto k : mask_indices(m)) {
      if (!r.generators[k]) {
        throw std::invalid_argument("uncovered symbol '" + src.coordinates()[k].generator + "'");
      }
    }
  }
  for (std::size_t v = 0; v < src.num_vars(); ++v) {
    if (r.scalars[v]) images[v] = *r.scalars[v];
  }

  Form out(tgt);
  for (const auto& [m, s] : a.components()) {
    Scalar coeff = [&] {
      try {
        return s.substitute(images);
      } catch (const std::domain_error&) {
        throw std::domain_error("division by the zero polynomial after substitution");
      }
    }();
    Form frame = Form::constant(tgt, Gauss(1));
    for (auto k : mask_indices(m)) frame = wedge(frame, *r.generators[k]);
    out += frame.scaled(coeff);
  }
  return out;
}

}  // namespace gcv
