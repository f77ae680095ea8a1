#include "gcv/chart.hpp"

#include <set>
#include <stdexcept>

namespace gcv {

std::optional<std::size_t> Chart::variable_index(std::string_view name) const {
  auto it = var_lookup_.find(name);
  if (it == var_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Chart::coordinate_index(std::string_view name) const {
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    if (coordinates_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Chart::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    if (coordinates_[i].generator == name) return i;
  }
  return std::nullopt;
}

const ComplexPair* Chart::complex_pair(std::string_view name) const {
  for (const auto& p : pairs_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const UnitSymbol* Chart::unit(std::string_view name) const {
  for (const auto& u : units_) {
    if (u.name == name) return &u;
  }
  return nullptr;
}

std::optional<std::size_t> Chart::coordinate_of_variable(std::size_t var) const {
  if (var_kinds_.at(var) != VarKind::coordinate) return std::nullopt;
  return coordinate_index(var_names_[var]);
}

std::optional<std::size_t> Chart::variable_of_coordinate(std::size_t coord) const {
  if (coordinates_.at(coord).kind == CoordKind::angle) return std::nullopt;
  return variable_index(coordinates_[coord].name);
}

Scalar Chart::var(std::string_view name) const {
  auto idx = variable_index(name);
  if (!idx) throw std::invalid_argument("unknown scalar symbol '" + std::string(name) + "' on chart " + name_);
  return Scalar::variable(num_vars(), *idx);
}

Scalar Chart::complex_value(std::string_view pair_name) const {
  if (const auto* p = complex_pair(pair_name)) {
    return var(p->re) + var(p->im).scaled(Gauss::imaginary_unit());
  }
  return var(pair_name);
}

std::optional<std::vector<Scalar>> Chart::variable_differential(std::size_t var) const {
  std::vector<Scalar> out(dimension(), zero());
  switch (var_kinds_.at(var)) {
    case VarKind::constant:
      return out;
    case VarKind::coordinate: {
      std::size_t k = *coordinate_of_variable(var);
      if (coordinates_[k].kind == CoordKind::log) {
        out[k] = Scalar::variable(num_vars(), var);
      } else {
        out[k] = constant(Gauss(1));
      }
      return out;
    }
    case VarKind::unit: {
      const UnitSymbol* u = unit(var_names_[var]);
      if (u->dlog.empty()) return std::nullopt;
      Scalar self = Scalar::variable(num_vars(), var);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = u->dlog[k] * self;
      return out;
    }
  }
  return std::nullopt;
}

bool Chart::same_as(const Chart& other) const {
  if (this == &other) return true;
  if (name_ != other.name_ || var_names_ != other.var_names_) return false;
  if (coordinates_.size() != other.coordinates_.size()) return false;
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    if (coordinates_[i].name != other.coordinates_[i].name ||
        coordinates_[i].kind != other.coordinates_[i].kind ||
        coordinates_[i].generator != other.coordinates_[i].generator) {
      return false;
    }
  }
  return true;
}

void require_same_chart(const Chart& a, const Chart& b) {
  if (!a.same_as(b)) {
    throw std::invalid_argument("chart mismatch: " + a.name() + " vs " + b.name());
  }
}

Chart::Builder& Chart::Builder::coordinate(std::string name, CoordKind kind, std::string generator) {
  if (generator.empty()) {
    if (kind == CoordKind::log) throw std::invalid_argument("log coordinate " + name + " needs a d-log generator name");
    generator = "d" + name;
  }
  coordinates_.push_back({std::move(name), kind, std::move(generator)});
  return *this;
}

Chart::Builder& Chart::Builder::complex_pair(std::string name, std::string re, std::string im) {
  pairs_.push_back({std::move(name), std::move(re), std::move(im)});
  return *this;
}

Chart::Builder& Chart::Builder::constant(std::string name) {
  constants_.push_back(std::move(name));
  return *this;
}

Chart::Builder& Chart::Builder::unit(std::string name, std::string conjugate) {
  if (conjugate.empty()) conjugate = name;
  units_.push_back({std::move(name), std::move(conjugate), {}});
  return *this;
}

Chart::Builder& Chart::Builder::unit_dlog(const std::string& name, std::vector<Scalar> dlog) {
  for (auto& u : units_) {
    if (u.name == name) {
      u.dlog = std::move(dlog);
      return *this;
    }
  }
  throw std::invalid_argument("unknown unit symbol " + name);
}

ChartPtr Chart::Builder::build() const {
  std::shared_ptr<Chart> chart(new Chart());
  chart->name_ = name_;
  chart->coordinates_ = coordinates_;
  chart->pairs_ = pairs_;
  chart->constants_ = constants_;
  chart->units_ = units_;

  if (coordinates_.size() > 24) throw std::invalid_argument("charts are limited to 24 coordinates");

  std::set<std::string> names;
  auto claim = [&](const std::string& n) {
    if (n.empty()) throw std::invalid_argument("empty symbol name in chart " + name_);
    if (!names.insert(n).second) {
      throw std::invalid_argument("duplicate symbol '" + n + "' in chart " + name_);
    }
  };
  for (const auto& c : coordinates_) {
    claim(c.name);
    claim(c.generator);
  }
  for (const auto& c : constants_) claim(c);
  for (const auto& u : units_) claim(u.name);
  for (const auto& p : pairs_) {
    claim(p.name);
    claim("d" + p.name);
    claim(p.name + "bar");
    claim("d" + p.name + "bar");
    if (p.re == p.im) throw std::invalid_argument("complex pair " + p.name + " needs two distinct coordinates");
    for (const auto& part : {p.re, p.im}) {
      auto k = chart->coordinate_index(part);
      if (!k || coordinates_[*k].kind != CoordKind::real) {
        throw std::invalid_argument("complex pair " + p.name + " references non-real coordinate " + part);
      }
    }
  }

  for (const auto& c : coordinates_) {
    if (c.kind == CoordKind::angle) continue;
    chart->var_names_.push_back(c.name);
    chart->var_kinds_.push_back(VarKind::coordinate);
  }
  for (const auto& c : constants_) {
    chart->var_names_.push_back(c);
    chart->var_kinds_.push_back(VarKind::constant);
  }
  for (const auto& u : units_) {
    chart->var_names_.push_back(u.name);
    chart->var_kinds_.push_back(VarKind::unit);
  }
  for (std::size_t i = 0; i < chart->var_names_.size(); ++i) {
    chart->var_lookup_.emplace(chart->var_names_[i], i);
  }

  chart->conjugation_.resize(chart->var_names_.size());
  for (std::size_t i = 0; i < chart->var_names_.size(); ++i) chart->conjugation_[i] = i;
  for (const auto& u : units_) {
    auto self = *chart->variable_index(u.name);
    auto partner = chart->variable_index(u.conjugate);
    const UnitSymbol* back = chart->unit(u.conjugate);
    if (!partner || back == nullptr || back->conjugate != u.name) {
      throw std::invalid_argument("unit " + u.name + " has no mutual conjugate " + u.conjugate);
    }
    chart->conjugation_[self] = *partner;
  }
  for (const auto& u : units_) {
    if (!u.dlog.empty()) {
      if (u.dlog.size() != coordinates_.size()) throw std::invalid_argument("dlog of " + u.name + " has wrong length");
      for (const auto& s : u.dlog) {
        if (s.nvars() != chart->num_vars()) throw std::invalid_argument("dlog of " + u.name + " has wrong arity");
      }
    }
  }
  return chart;
}

}  // namespace gcv
