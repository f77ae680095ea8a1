#include "gcv/gcs.hpp"

#include <set>
#include <sstream>

#include "gcv/linalg.hpp"

namespace gcv {

GCModel::GCModel(std::string name_, Form rho_, std::optional<Form> h_, std::optional<std::string> unit_)
    : name(std::move(name_)), rho(std::move(rho_)), h(h_ ? std::move(*h_) : Form(rho.chart())),
      unit(std::move(unit_)) {
  if (rho.is_zero()) throw std::invalid_argument("model " + name + ": rho is zero");
  require_same_chart(*rho.chart(), *h.chart());
  if (!h.is_zero() && !h.is_homogeneous(3)) throw std::invalid_argument("model " + name + ": H must be a 3-form");
  if (!exterior_d(h).is_zero()) throw std::invalid_argument("model " + name + ": H is not closed");
  if (unit && chart()->unit(*unit) == nullptr) {
    throw std::invalid_argument("model " + name + ": unknown unit symbol " + *unit);
  }
}

Form GCModel::spinor() const {
  if (!unit) return rho;
  return rho.scaled(chart()->var(*unit));
}

std::string format_point(const Point& p) {
  std::ostringstream out;
  out << "(";
  bool first = true;
  for (const auto& [name, value] : p) {
    if (!first) out << ", ";
    first = false;
    out << name << "=" << value.get_str();
  }
  out << ")";
  return out.str();
}

std::vector<Gauss> point_values(const Chart& chart, const Point& p) {
  std::vector<Gauss> values;
  const auto& names = chart.variable_names();
  for (std::size_t v = 0; v < names.size(); ++v) {
    auto it = p.find(names[v]);
    if (it != p.end()) {
      values.emplace_back(it->second);
    } else if (chart.variable_kind(v) == VarKind::coordinate) {
      throw std::invalid_argument("point " + format_point(p) + " does not fix coordinate '" + names[v] + "'");
    } else {
      values.emplace_back(1);
    }
  }
  return values;
}

Form evaluate_at(const Form& f, const Point& p) {
  const ChartPtr& chart = f.chart();
  auto values = point_values(*chart, p);
  Form out(chart);
  for (const auto& [mask, s] : f.components()) out.add(mask, chart->constant(s.evaluate(values)));
  return out;
}

namespace {

Matrix<Gauss> clifford_matrix(const std::vector<FrameElement>& frame, const Form& rho_pt,
                              const std::vector<Mask>& rows) {
  Matrix<Gauss> a(rows.size(), frame.size(), Gauss(0));
  for (std::size_t k = 0; k < frame.size(); ++k) {
    Form image = clifford(frame[k].value, rho_pt);
    for (std::size_t r = 0; r < rows.size(); ++r) a(r, k) = image.component(rows[r]).constant_value();
  }
  return a;
}

std::vector<Mask> all_masks(const Chart& chart) {
  std::vector<Mask> masks;
  Mask top = (Mask{1} << chart.dimension()) - 1;
  for (Mask m = 0; m <= top; ++m) masks.push_back(m);
  return masks;
}

Mask volume_mask(const Chart& chart) { return (Mask{1} << chart.dimension()) - 1; }

int sign_of(const mpq_class& q) { return sgn(q) > 0 ? 1 : sgn(q) < 0 ? -1 : 0; }

}  // namespace

PointedEvaluation annihilator_at(const GCModel& m, const Point& p) {
  const ChartPtr& chart = m.chart();
  Form rho_pt = evaluate_at(m.spinor(), p);
  auto frame = standard_frame(chart);
  auto a = clifford_matrix(frame, rho_pt, all_masks(*chart));
  PointedEvaluation out;
  out.point = p;
  for (const auto& v : nullspace(a, Gauss(0), Gauss(1))) {
    GVec u = GVec::zero(chart);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_zero()) u += frame[k].value.scaled(v[k]);
    }
    out.basis.push_back(std::move(u));
  }
  return out;
}

bool PurityReport::ok() const {
  for (const auto& c : points) {
    if (!c.failure.empty()) return false;
  }
  return true;
}

std::string PurityReport::first_failure() const {
  for (const auto& c : points) {
    if (!c.failure.empty()) return format_point(c.point) + ": " + c.failure;
  }
  return "";
}

bool PurityReport::parity_constant() const {
  std::set<int> parities;
  for (const auto& c : points) {
    if (c.type >= 0) parities.insert(c.type % 2);
  }
  return parities.size() <= 1;
}

PurityReport check_pure_nondegenerate(const GCModel& m, const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("no sample points");
  const Chart& chart = *m.chart();
  std::size_t n = chart.dimension() / 2;
  // i^{-n} for the orientation sign.
  Gauss phase(1);
  for (std::size_t k = 0; k < n; ++k) phase *= Gauss(0, -1);
  PurityReport report;
  for (const auto& p : points) {
    PointCheck c;
    c.point = p;
    try {
      Form rho_pt = evaluate_at(m.spinor(), p);
      c.type = rho_pt.min_degree();
      c.annihilator_dim = annihilator_at(m, p).dimension();
      c.pairing = mukai(rho_pt, rho_pt.conj()).component(volume_mask(chart)).constant_value();
      Gauss oriented = c.pairing * phase;
      if (oriented.is_real()) c.orientation = sign_of(oriented.re());
      if (c.annihilator_dim != chart.dimension()) {
        c.failure = "not pure: annihilator has dimension " + std::to_string(c.annihilator_dim);
      } else if (c.pairing.is_zero()) {
        c.failure = "degenerate: (rho, conj rho) = 0";
      } else if (!oriented.is_real()) {
        c.failure = "i^-n (rho, conj rho) is not real";
      }
    } catch (const std::domain_error& err) {
      c.failure = err.what();
    }
    report.points.push_back(std::move(c));
  }
  return report;
}

int type_at(const GCModel& m, const Point& p) {
  Form rho_pt = evaluate_at(m.spinor(), p);
  if (rho_pt.is_zero()) throw std::domain_error("rho vanishes at " + format_point(p));
  return rho_pt.min_degree();
}

int degeneracy_order(const GCModel& m, const Point& p, const Point& direction) {
  const Chart& chart = *m.chart();
  auto base = point_values(chart, p);
  const auto& names = chart.variable_names();
  std::vector<Scalar> images;
  Scalar t = Scalar::variable(1, 0);
  for (std::size_t v = 0; v < names.size(); ++v) {
    Scalar img(1, base[v]);
    auto it = direction.find(names[v]);
    if (it != direction.end()) img += t.scaled(Gauss(it->second));
    images.push_back(std::move(img));
  }
  Scalar s = m.rho.scalar_part().substitute(images);
  if (s.den().constant_term().is_zero()) throw std::domain_error("pole at " + format_point(p));
  if (s.is_zero()) throw std::invalid_argument("degree-0 component vanishes along the transversal line");
  std::uint32_t order = s.num().terms().rbegin()->first[0];
  return static_cast<int>(order);
}

IntegrabilityWitness integrability_witness(const GCModel& m) {
  const ChartPtr& chart = m.chart();
  Form rho = m.spinor();
  Form rhs = exterior_d(rho) + wedge(m.h, rho);
  auto frame = standard_frame(chart);
  std::vector<Form> images;
  std::set<Mask, MaskLess> rows;
  for (const auto& e : frame) {
    images.push_back(clifford(e.value, rho));
    for (const auto& [mask, s] : images.back().components()) rows.insert(mask);
  }
  for (const auto& [mask, s] : rhs.components()) rows.insert(mask);
  Matrix<Scalar> a(rows.size(), frame.size(), chart->zero());
  std::vector<Scalar> b;
  std::size_t r = 0;
  for (Mask mask : rows) {
    for (std::size_t k = 0; k < frame.size(); ++k) a(r, k) = images[k].component(mask);
    b.push_back(rhs.component(mask));
    ++r;
  }
  auto sol = solve(a, b, chart->zero());
  if (!sol) throw NotIntegrable();
  IntegrabilityWitness out{GVec::zero(chart), sol->nullity};
  for (std::size_t k = 0; k < frame.size(); ++k) {
    if (!sol->particular[k].is_zero()) out.witness += frame[k].value.scaled(sol->particular[k]);
  }
  return out;
}

GCModel beta_model(std::string name, const Bivector& beta, const Form& omega_n0) {
  return GCModel(std::move(name), beta_transform(beta, omega_n0));
}

GluingReport verify_gluing(const GCModel& lhs, const GCModel& rhs, const SubstitutionRules& map,
                           const Scalar& g, const Form& b) {
  require_same_chart(*map.source, *lhs.chart());
  require_same_chart(*map.target, *rhs.chart());
  if (g.is_zero()) throw std::invalid_argument("gluing factor g is zero");
  if (!b.is_zero() && !b.is_homogeneous(2)) throw std::invalid_argument("B must be a 2-form");
  if (b.conj() != b) throw std::invalid_argument("B is not real");
  if (!exterior_d(b).is_zero()) throw std::invalid_argument("B is not closed");
  Form pulled = substitute(lhs.spinor(), map);
  Form expected = wedge(exp_form(b), rhs.spinor()).scaled(g);
  bool ok = pulled == expected;
  GluingReport report{ok, -1, std::move(pulled), std::move(expected), ""};
  if (!report.ok) {
    int top = std::max(report.pulled.max_degree(), report.expected.max_degree());
    for (int k = 0; k <= top; ++k) {
      if (report.pulled.part(k) != report.expected.part(k)) {
        report.mismatch_degree = k;
        break;
      }
    }
    report.message = "components of degree " + std::to_string(report.mismatch_degree) + " differ";
  }
  return report;
}

namespace models {

ChartPtr c2_chart(const std::string& name) {
  return Chart::Builder(name)
      .coordinate("x").coordinate("y").coordinate("u").coordinate("v")
      .complex_pair("w", "x", "y")
      .complex_pair("z", "u", "v")
      .build();
}

ChartPtr cotangent_chart(const std::string& name, bool oriented) {
  Chart::Builder b(name);
  if (oriented) {
    b.coordinate("x").coordinate("y");
  } else {
    b.coordinate("y").coordinate("x");
  }
  return b.coordinate("u").coordinate("v").complex_pair("z", "x", "y").complex_pair("w", "u", "v").build();
}

GCModel complex_model(const ChartPtr& c2) {
  return GCModel("complex", wedge(named_one_form(c2, "dw"), named_one_form(c2, "dz")));
}

GCModel symplectic_model(const ChartPtr& c2) {
  Form omega = wedge(named_one_form(c2, "dx"), named_one_form(c2, "dy")) +
               wedge(named_one_form(c2, "du"), named_one_form(c2, "dv"));
  return GCModel("symplectic", exp_form(omega.scaled(Gauss::imaginary_unit())));
}

GCModel typechange_model(const ChartPtr& c2) { return line_bundle_model(c2, 1); }

GCModel line_bundle_model(const ChartPtr& c2, int order) {
  GVec dw = GVec::partial(c2, "w");
  GVec dz = GVec::partial(c2, "z");
  Bivector beta = Bivector::wedge(dw, dz).scaled(c2->complex_value("w").pow(order));
  Form omega = wedge(named_one_form(c2, "dw"), named_one_form(c2, "dz"));
  return beta_model(order == 1 ? "typechange" : "degenerate order " + std::to_string(order), beta, omega);
}

Gluing divisor_gluing(int a, bool oriented) {
  ChartPtr ui = cotangent_chart(oriented ? "Ui" : "Ui-", oriented);
  ChartPtr u0 = cotangent_chart("U0");
  Scalar za_i = ui->complex_value("z").pow(a);
  Form lhs_rho = Form::scalar(ui, za_i) + wedge(named_one_form(ui, "dz"), named_one_form(ui, "dw"));
  Form big_omega = wedge(named_one_form(u0, "dz"), named_one_form(u0, "dw"));
  Form b = (big_omega + big_omega.conj()).scaled(Gauss(mpq_class(1, 2)));
  Form omega = (big_omega - big_omega.conj()).scaled(Gauss(0, mpq_class(-1, 2)));
  Scalar za = u0->complex_value("z").pow(a);
  SubstitutionRules map{ui, u0, {{"w", za * u0->complex_value("w")}}, {}};
  return Gluing{GCModel("rho_i", lhs_rho), GCModel("rho_0", exp_form(omega.scaled(Gauss::imaginary_unit()))),
                std::move(map), za, b};
}

}  // namespace models

}  // namespace gcv
