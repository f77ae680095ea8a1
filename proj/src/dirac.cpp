#include "gcv/dirac.hpp"

#include <bit>
#include <stdexcept>

namespace gcv {

namespace {

void same_chart(const GVec& a, const GVec& b) { require_same_chart(*a.chart, *b.chart); }

std::vector<Scalar> zeros(const Chart& chart) { return std::vector<Scalar>(chart.dimension(), chart.zero()); }

Scalar evaluate_covector(const std::vector<Scalar>& xi, const std::vector<Scalar>& x) {
  Scalar sum(x.empty() ? 0 : x.front().nvars());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!x[k].is_zero() && !xi[k].is_zero()) sum += x[k] * xi[k];
  }
  return sum;
}

std::vector<Scalar> one_form_components(const Form& f) {
  std::vector<Scalar> out = zeros(*f.chart());
  for (const auto& [m, s] : f.components()) {
    if (mask_degree(m) != 1) throw std::invalid_argument("expected a 1-form");
    out[static_cast<std::size_t>(std::countr_zero(m))] = s;
  }
  return out;
}

}  // namespace

GVec GVec::zero(ChartPtr chart) {
  GVec u{chart, zeros(*chart), zeros(*chart)};
  return u;
}

GVec GVec::from_vector(ChartPtr chart, std::vector<Scalar> vec) {
  if (vec.size() != chart->dimension()) throw std::invalid_argument("vector has wrong number of components");
  GVec u = zero(std::move(chart));
  u.vec = std::move(vec);
  return u;
}

GVec GVec::from_covector(const Form& xi) {
  GVec u = zero(xi.chart());
  u.cov = one_form_components(xi);
  return u;
}

GVec GVec::partial(ChartPtr chart, const std::string& name) {
  GVec u = zero(chart);
  if (auto k = chart->coordinate_index(name)) {
    u.vec[*k] = chart->constant(Gauss(1));
    return u;
  }
  for (const auto& p : chart->complex_pairs()) {
    bool plain = name == p.name;
    bool bar = name == p.name + "bar";
    if (!plain && !bar) continue;
    Gauss half(mpq_class(1, 2));
    Gauss ihalf(0, mpq_class(1, 2));
    u.vec[*chart->coordinate_index(p.re)] = chart->constant(half);
    u.vec[*chart->coordinate_index(p.im)] = chart->constant(bar ? ihalf : -ihalf);
    return u;
  }
  throw std::invalid_argument("unknown direction '" + name + "' on chart " + chart->name());
}

Form GVec::covector_form() const {
  Form f(chart);
  for (std::size_t k = 0; k < cov.size(); ++k) f.add(Mask{1} << k, cov[k]);
  return f;
}

bool GVec::is_zero() const {
  for (const auto& s : vec) {
    if (!s.is_zero()) return false;
  }
  for (const auto& s : cov) {
    if (!s.is_zero()) return false;
  }
  return true;
}

bool GVec::is_constant() const {
  for (const auto& s : vec) {
    if (!s.is_constant()) return false;
  }
  for (const auto& s : cov) {
    if (!s.is_constant()) return false;
  }
  return true;
}

GVec GVec::conj() const {
  GVec out = *this;
  for (auto& s : out.vec) s = chart->conj(s);
  for (auto& s : out.cov) s = chart->conj(s);
  return out;
}

GVec GVec::scaled(const Scalar& s) const {
  GVec out = *this;
  for (auto& c : out.vec) c *= s;
  for (auto& c : out.cov) c *= s;
  return out;
}

GVec GVec::scaled(const Gauss& c) const {
  GVec out = *this;
  for (auto& s : out.vec) s = s.scaled(c);
  for (auto& s : out.cov) s = s.scaled(c);
  return out;
}

GVec& GVec::operator+=(const GVec& other) {
  same_chart(*this, other);
  for (std::size_t k = 0; k < vec.size(); ++k) vec[k] += other.vec[k];
  for (std::size_t k = 0; k < cov.size(); ++k) cov[k] += other.cov[k];
  return *this;
}

GVec& GVec::operator-=(const GVec& other) {
  same_chart(*this, other);
  for (std::size_t k = 0; k < vec.size(); ++k) vec[k] -= other.vec[k];
  for (std::size_t k = 0; k < cov.size(); ++k) cov[k] -= other.cov[k];
  return *this;
}

bool operator==(const GVec& a, const GVec& b) {
  return a.chart->same_as(*b.chart) && a.vec == b.vec && a.cov == b.cov;
}

namespace {

// One entry per frame direction: a complex pair (covering two real
// coordinates) or a single coordinate.
struct Direction {
  const ComplexPair* pair = nullptr;
  std::size_t coord = 0;
};

std::vector<Direction> frame_directions(const Chart& chart) {
  std::vector<Direction> out;
  std::vector<bool> covered(chart.dimension(), false);
  for (std::size_t k = 0; k < chart.dimension(); ++k) {
    if (covered[k]) continue;
    const std::string& name = chart.coordinates()[k].name;
    Direction d;
    d.coord = k;
    for (const auto& p : chart.complex_pairs()) {
      if (p.re == name || p.im == name) d.pair = &p;
    }
    if (d.pair != nullptr) {
      covered[*chart.coordinate_index(d.pair->re)] = true;
      covered[*chart.coordinate_index(d.pair->im)] = true;
    }
    covered[k] = true;
    out.push_back(d);
  }
  return out;
}

}  // namespace

std::vector<FrameElement> standard_frame(const ChartPtr& chart) {
  std::vector<FrameElement> vectors;
  std::vector<FrameElement> covectors;
  for (const auto& d : frame_directions(*chart)) {
    if (d.pair != nullptr) {
      for (const std::string& name : {d.pair->name, d.pair->name + "bar"}) {
        vectors.push_back({"(partial " + name + ")", GVec::partial(chart, name)});
        covectors.push_back({"d" + name, GVec::from_covector(named_one_form(chart, "d" + name))});
      }
    } else {
      const Coordinate& c = chart->coordinates()[d.coord];
      vectors.push_back({"(partial " + c.name + ")", GVec::partial(chart, c.name)});
      covectors.push_back({c.generator, GVec::from_covector(Form::generator(chart, d.coord))});
    }
  }
  vectors.insert(vectors.end(), covectors.begin(), covectors.end());
  return vectors;
}

std::vector<Scalar> frame_coordinates(const GVec& u) {
  const Chart& chart = *u.chart;
  Gauss i = Gauss::imaginary_unit();
  Gauss half(mpq_class(1, 2));
  std::vector<Scalar> vectors;
  std::vector<Scalar> covectors;
  for (const auto& d : frame_directions(chart)) {
    if (d.pair == nullptr) {
      vectors.push_back(u.vec[d.coord]);
      covectors.push_back(u.cov[d.coord]);
      continue;
    }
    // ∂w = (∂re - i ∂im)/2 and dw = dre + i dim.
    std::size_t re = *chart.coordinate_index(d.pair->re);
    std::size_t im = *chart.coordinate_index(d.pair->im);
    vectors.push_back(u.vec[re] + u.vec[im].scaled(i));
    vectors.push_back(u.vec[re] - u.vec[im].scaled(i));
    covectors.push_back((u.cov[re] - u.cov[im].scaled(i)).scaled(half));
    covectors.push_back((u.cov[re] + u.cov[im].scaled(i)).scaled(half));
  }
  vectors.insert(vectors.end(), covectors.begin(), covectors.end());
  return vectors;
}

Scalar Bivector::component(std::size_t i, std::size_t j) const {
  if (i == j) return chart_->zero();
  bool flip = i > j;
  auto it = comps_.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
  if (it == comps_.end()) return chart_->zero();
  return flip ? -it->second : it->second;
}

void Bivector::add(std::size_t i, std::size_t j, const Scalar& s) {
  if (i == j || s.is_zero()) return;
  if (i >= chart_->dimension() || j >= chart_->dimension()) throw std::out_of_range("bivector index out of range");
  Scalar value = i < j ? s : -s;
  auto key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
  auto [it, inserted] = comps_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

Bivector Bivector::wedge(const GVec& x, const GVec& y) {
  same_chart(x, y);
  Bivector out(x.chart);
  for (std::size_t i = 0; i < x.vec.size(); ++i) {
    if (x.vec[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.vec.size(); ++j) {
      if (i != j && !y.vec[j].is_zero()) out.add(i, j, x.vec[i] * y.vec[j]);
    }
  }
  return out;
}

Bivector Bivector::conj() const {
  Bivector out(chart_);
  for (const auto& [key, s] : comps_) out.comps_.emplace(key, chart_->conj(s));
  return out;
}

Bivector Bivector::scaled(const Scalar& s) const {
  Bivector out(chart_);
  for (const auto& [key, c] : comps_) out.add(key.first, key.second, c * s);
  return out;
}

Bivector& Bivector::operator+=(const Bivector& other) {
  require_same_chart(*chart_, *other.chart_);
  for (const auto& [key, s] : other.comps_) add(key.first, key.second, s);
  return *this;
}

bool operator==(const Bivector& a, const Bivector& b) {
  return a.chart_->same_as(*b.chart_) && a.comps_ == b.comps_;
}

std::vector<Scalar> Bivector::apply(const std::vector<Scalar>& xi) const {
  std::vector<Scalar> out = zeros(*chart_);
  for (const auto& [key, s] : comps_) {
    auto [i, j] = key;
    if (!xi[i].is_zero()) out[j] += xi[i] * s;
    if (!xi[j].is_zero()) out[i] -= xi[j] * s;
  }
  return out;
}

Scalar pairing(const GVec& u, const GVec& v) {
  same_chart(u, v);
  Scalar sum = evaluate_covector(v.cov, u.vec) + evaluate_covector(u.cov, v.vec);
  return sum.scaled(Gauss(mpq_class(1, 2)));
}

Form clifford(const GVec& u, const Form& rho) {
  require_same_chart(*u.chart, *rho.chart());
  return contract(u.vec, rho) + wedge(u.covector_form(), rho);
}

Scalar apply_vector(const ChartPtr& chart, const std::vector<Scalar>& x, const Scalar& f) {
  return contract(x, differential(chart, f)).scalar_part();
}

std::vector<Scalar> lie_bracket(const ChartPtr& chart, const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  std::vector<Scalar> out = zeros(*chart);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = apply_vector(chart, x, y[k]) - apply_vector(chart, y, x[k]);
  }
  return out;
}

Form lie_derivative(const std::vector<Scalar>& x, const Form& a) {
  return contract(x, exterior_d(a)) + exterior_d(contract(x, a));
}

GVec courant(const GVec& u, const GVec& v, const Form& h) {
  same_chart(u, v);
  require_same_chart(*u.chart, *h.chart());
  if (!h.is_zero() && !h.is_homogeneous(3)) throw std::invalid_argument("background H must be a 3-form");
  if (!exterior_d(h).is_zero()) throw std::invalid_argument("background 3-form is not closed (dH != 0)");
  const ChartPtr& chart = u.chart;
  Form xi = u.covector_form();
  Form eta = v.covector_form();
  Form cov = lie_derivative(u.vec, eta) - lie_derivative(v.vec, xi);
  Scalar skew = evaluate_covector(v.cov, u.vec) - evaluate_covector(u.cov, v.vec);
  cov -= differential(chart, skew).scaled(Gauss(mpq_class(1, 2)));
  cov += contract(v.vec, contract(u.vec, h));
  GVec out = GVec::from_covector(cov);
  out.vec = lie_bracket(chart, u.vec, v.vec);
  return out;
}

Form mukai(const Form& rho, const Form& sigma) {
  require_same_chart(*rho.chart(), *sigma.chart());
  return wedge(rho.reversed(), sigma).part(static_cast<int>(rho.chart()->dimension()));
}

Form b_transform(const Form& b, const Form& rho) {
  if (!b.is_homogeneous(2)) throw std::invalid_argument("B-field must be a 2-form");
  require_same_chart(*b.chart(), *rho.chart());
  return wedge(exp_form(b), rho);
}

GVec b_transform(const Form& b, const GVec& u) {
  if (!b.is_homogeneous(2)) throw std::invalid_argument("B-field must be a 2-form");
  require_same_chart(*b.chart(), *u.chart);
  GVec shift = GVec::from_covector(contract(u.vec, b));
  return u - shift;
}

Form contract(const Bivector& beta, const Form& a) {
  require_same_chart(*beta.chart(), *a.chart());
  const ChartPtr& chart = a.chart();
  Form out(chart);
  for (const auto& [key, s] : beta.components()) {
    std::vector<Scalar> ei = zeros(*chart);
    std::vector<Scalar> ej = zeros(*chart);
    ei[key.first] = chart->constant(Gauss(1));
    ej[key.second] = chart->constant(Gauss(1));
    out += contract(ej, contract(ei, a)).scaled(s);
  }
  return out;
}

Form beta_transform(const Bivector& beta, const Form& rho) {
  Form result = rho;
  Form term = rho;
  for (long k = 1;; ++k) {
    term = contract(beta, term).scaled(Gauss(mpq_class(1, k)));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

GVec beta_transform(const Bivector& beta, const GVec& u) {
  require_same_chart(*beta.chart(), *u.chart);
  GVec out = u;
  auto shift = beta.apply(u.cov);
  for (std::size_t k = 0; k < shift.size(); ++k) out.vec[k] += shift[k];
  return out;
}

}  // namespace gcv
