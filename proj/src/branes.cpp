#include "gcv/branes.hpp"

#include "gcv/linalg.hpp"

namespace gcv {

SubstitutionRules BraneData::pullback(const ChartPtr& ambient) const {
  return SubstitutionRules{ambient, surface, parametrization, {}};
}

bool TauReport::ok() const {
  for (const auto& p : points) {
    if (!p.failure.empty()) return false;
  }
  return !points.empty();
}

std::string TauReport::first_failure() const {
  for (const auto& p : points) {
    if (!p.failure.empty()) return format_point(p.surface_point) + ": " + p.failure;
  }
  return "";
}

namespace {

void validate(const GCModel& m, const BraneData& b) {
  const Chart& ambient = *m.chart();
  if (b.surface->dimension() != 2 || b.surface->num_vars() < 2) {
    throw std::invalid_argument("brane surface chart must have two real coordinates");
  }
  for (const auto& c : b.surface->coordinates()) {
    if (c.kind != CoordKind::real) throw std::invalid_argument("surface coordinate " + c.name + " is not real");
  }
  for (const auto& c : ambient.coordinates()) {
    if (c.kind != CoordKind::real) throw std::invalid_argument("ambient coordinate " + c.name + " is not real");
    if (b.parametrization.count(c.name) == 0) {
      throw std::invalid_argument("parametrization misses coordinate " + c.name);
    }
  }
  require_same_chart(*b.f.chart(), *b.surface);
  if (!b.f.is_zero() && !b.f.is_homogeneous(2)) throw std::invalid_argument("F must be a 2-form");
  if (substitute(m.h, b.pullback(m.chart())) != exterior_d(b.f)) {
    throw std::invalid_argument("dF differs from the pullback of H");
  }
}

std::vector<Gauss> gvec_components(const GVec& u) {
  std::vector<Gauss> out;
  for (const auto& s : u.vec) out.push_back(s.constant_value());
  for (const auto& s : u.cov) out.push_back(s.constant_value());
  return out;
}

TauPoint tau_point(const GCModel& m, const BraneData& b, const Point& q) {
  const Chart& ambient = *m.chart();
  const Chart& surface = *b.surface;
  std::size_t dim = ambient.dimension();
  TauPoint out;
  out.surface_point = q;
  auto qv = point_values(surface, q);

  std::vector<std::vector<Gauss>> tangents(2, std::vector<Gauss>(dim, Gauss(0)));
  for (std::size_t k = 0; k < dim; ++k) {
    const Scalar& img = b.parametrization.at(ambient.coordinates()[k].name);
    Gauss value = img.evaluate(qv);
    if (!value.is_real()) throw std::invalid_argument("parametrization takes a non-real value");
    out.ambient_point[ambient.coordinates()[k].name] = value.re();
    for (std::size_t j = 0; j < 2; ++j) {
      tangents[j][k] = img.derivative(*surface.variable_of_coordinate(j)).evaluate(qv);
    }
  }
  for (std::size_t v = 0; v < ambient.num_vars(); ++v) {
    if (ambient.variable_kind(v) != VarKind::coordinate) {
      auto it = q.find(ambient.variable_names()[v]);
      if (it != q.end()) out.ambient_point[it->first] = it->second;
    }
  }
  Gauss c = b.f.component(Mask{3}).evaluate(qv);

  Matrix<Gauss> constraint(2, dim, Gauss(0));
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < dim; ++k) constraint(j, k) = tangents[j][k];
  }
  if (rank(constraint) != 2) {
    out.failure = "parametrization is not an immersion";
    return out;
  }
  // ι*ξ = i_X F: i_{∂s}F = c dt and i_{∂t}F = −c ds.
  std::vector<std::vector<Gauss>> tau;
  std::vector<std::vector<Gauss>> rhs = {{Gauss(0), c}, {-c, Gauss(0)}};
  for (std::size_t j = 0; j < 2; ++j) {
    auto xi = solve(constraint, rhs[j], Gauss(0));
    std::vector<Gauss> col = tangents[j];
    col.insert(col.end(), xi->particular.begin(), xi->particular.end());
    tau.push_back(std::move(col));
  }
  for (auto& xi : nullspace(constraint, Gauss(0), Gauss(1))) {
    std::vector<Gauss> col(dim, Gauss(0));
    col.insert(col.end(), xi.begin(), xi.end());
    tau.push_back(std::move(col));
  }

  auto ann = annihilator_at(m, out.ambient_point);
  std::vector<std::vector<Gauss>> cols = tau;
  for (const auto& u : ann.basis) cols.push_back(gvec_components(u));
  Matrix<Gauss> stacked(2 * dim, cols.size(), Gauss(0));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t r = 0; r < 2 * dim; ++r) stacked(r, j) = cols[j][r];
  }
  out.intersection = cols.size() - rank(stacked);
  if (out.intersection != dim / 2) {
    out.failure = "tau_F is not invariant: intersection with L has dimension " + std::to_string(out.intersection);
  }
  return out;
}

}  // namespace

TauReport tau_invariance_at(const GCModel& m, const BraneData& b, const std::vector<Point>& points) {
  validate(m, b);
  TauReport report;
  for (const auto& q : points) {
    try {
      report.points.push_back(tau_point(m, b, q));
    } catch (const std::domain_error& err) {
      TauPoint p;
      p.surface_point = q;
      p.failure = err.what();
      report.points.push_back(std::move(p));
    }
  }
  return report;
}

FExtension f_extension(const ChartPtr& surface, const Scalar& u, const Scalar& v) {
  if (surface->num_vars() < 2) throw std::invalid_argument("surface chart needs two coordinates");
  std::size_t xi = *surface->variable_of_coordinate(0);
  std::size_t yi = *surface->variable_of_coordinate(1);
  Scalar x = Scalar::variable(surface->num_vars(), xi);
  Scalar y = Scalar::variable(surface->num_vars(), yi);
  Scalar sum = u.derivative(yi) + v.derivative(xi);
  Scalar identity = x * (v.derivative(yi) - u.derivative(xi)) - y * sum;
  FExtension out;
  if (!identity.is_zero()) {
    out.message = "not Lagrangian";
    return out;
  }
  out.lagrangian = true;
  auto q = divide_exact(sum.num(), x.num());
  if (!q) {
    out.message = "extension failure: u_y + v_x is not divisible by x";
    return out;
  }
  out.f = Scalar(*q, sum.den());
  return out;
}

Tau0Report tau0_preserved(const Bivector& beta, const std::vector<std::string>& normal) {
  const ChartPtr& chart = beta.chart();
  Bivector p = beta + beta.conj();
  std::vector<std::size_t> normal_coords;
  std::vector<Scalar> on_sigma(chart->num_vars(), chart->zero());
  for (std::size_t v = 0; v < chart->num_vars(); ++v) on_sigma[v] = Scalar::variable(chart->num_vars(), v);
  for (const auto& name : normal) {
    auto k = chart->coordinate_index(name);
    if (!k) throw std::invalid_argument("unknown normal coordinate " + name);
    normal_coords.push_back(*k);
    if (auto v = chart->variable_of_coordinate(*k)) on_sigma[*v] = chart->zero();
  }
  Tau0Report report;
  for (std::size_t k : normal_coords) {
    const std::string& gen = chart->coordinates()[k].generator;
    GVec xi = GVec::from_covector(Form::generator(chart, k));
    GVec image = beta_transform(p, xi);
    bool inside = image.cov == xi.cov;
    for (std::size_t j : normal_coords) {
      if (!image.vec[j].substitute(on_sigma).is_zero()) inside = false;
    }
    report.details.push_back("e^P(" + gen + ") " + (inside ? "lies in" : "leaves") + " tau_0");
    report.ok = report.ok && inside;
  }
  return report;
}

int BraneTopology::euler_characteristic() const { return orientable ? 2 - 2 * genus : 2 - genus; }

int normal_euler(const BraneTopology& t) {
  if (t.genus < 0 || t.n < 0) throw std::invalid_argument("genus and n must be non-negative");
  if (!t.orientable && t.genus < 1) throw std::invalid_argument("non-orientable surface needs a crosscap");
  if (t.orientable && (t.k < 0 || t.k > t.n)) throw std::invalid_argument("need 0 <= k <= n");
  return t.n - t.euler_characteristic();
}

}  // namespace gcv
