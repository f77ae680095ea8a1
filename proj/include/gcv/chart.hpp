#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcv/scalar.hpp"

namespace gcv {

/// real: ordinary coordinate, a scalar variable with differential "d<name>".
/// angle: constant-coefficient direction; never a scalar variable.
/// log: scalar variable whose only cobasis generator is the declared d-log form.
enum class CoordKind { real, angle, log };

struct Coordinate {
  std::string name;
  CoordKind kind = CoordKind::real;
  std::string generator;
};

/// w := re + i*im. Also introduces the names "d<w>", "<w>bar" and "d<w>bar".
struct ComplexPair {
  std::string name;
  std::string re;
  std::string im;
};

/// Nowhere-zero scalar symbol. Its differential is u * dlog.
struct UnitSymbol {
  std::string name;
  std::string conjugate;
  std::vector<Scalar> dlog;  // one entry per cobasis generator; empty when undeclared
};

enum class VarKind { coordinate, constant, unit };

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

/// A named coordinate patch. Cobasis generator k is the differential (or d-log)
/// attached to coordinate k, so the cobasis size equals the dimension. Scalar
/// variables are the non-angle coordinates, then the constants, then the units.
class Chart {
public:
  class Builder;

  const std::string& name() const { return name_; }
  const std::vector<Coordinate>& coordinates() const { return coordinates_; }
  const std::vector<ComplexPair>& complex_pairs() const { return pairs_; }
  const std::vector<std::string>& constants() const { return constants_; }
  const std::vector<UnitSymbol>& units() const { return units_; }

  std::size_t dimension() const { return coordinates_.size(); }
  std::size_t num_vars() const { return var_names_.size(); }
  const std::vector<std::string>& variable_names() const { return var_names_; }

  std::optional<std::size_t> variable_index(std::string_view name) const;
  std::optional<std::size_t> coordinate_index(std::string_view name) const;
  std::optional<std::size_t> generator_index(std::string_view name) const;
  const ComplexPair* complex_pair(std::string_view name) const;
  const UnitSymbol* unit(std::string_view name) const;

  VarKind variable_kind(std::size_t var) const { return var_kinds_[var]; }
  /// Coordinate index of a coordinate variable.
  std::optional<std::size_t> coordinate_of_variable(std::size_t var) const;
  /// Variable index of a non-angle coordinate.
  std::optional<std::size_t> variable_of_coordinate(std::size_t coord) const;

  /// Variable permutation realizing complex conjugation (units swap with partners).
  const std::vector<std::size_t>& conjugation() const { return conjugation_; }

  Scalar zero() const { return Scalar(num_vars()); }
  Scalar constant(const Gauss& c) const { return Scalar(num_vars(), c); }
  Scalar var(std::string_view name) const;
  /// Complex pair value re + i*im, or a plain variable.
  Scalar complex_value(std::string_view pair_name) const;
  Scalar conj(const Scalar& s) const { return s.conj().permuted(conjugation_); }

  /// Differential of variable `var` as cobasis components, or nullopt for a
  /// unit without a declared d-log.
  std::optional<std::vector<Scalar>> variable_differential(std::size_t var) const;

  bool same_as(const Chart& other) const;

private:
  Chart() = default;

  std::string name_;
  std::vector<Coordinate> coordinates_;
  std::vector<ComplexPair> pairs_;
  std::vector<std::string> constants_;
  std::vector<UnitSymbol> units_;
  std::vector<std::string> var_names_;
  std::vector<VarKind> var_kinds_;
  std::vector<std::size_t> conjugation_;
  std::map<std::string, std::size_t, std::less<>> var_lookup_;
};

class Chart::Builder {
public:
  explicit Builder(std::string name) : name_(std::move(name)) {}

  Builder& coordinate(std::string name, CoordKind kind = CoordKind::real,
                      std::string generator = {});
  Builder& complex_pair(std::string name, std::string re, std::string im);
  Builder& constant(std::string name);
  Builder& unit(std::string name, std::string conjugate = {});
  /// dlog components must use the arity of the chart returned by build().
  Builder& unit_dlog(const std::string& name, std::vector<Scalar> dlog);

  /// Validates names and references; throws std::invalid_argument.
  ChartPtr build() const;

private:
  std::string name_;
  std::vector<Coordinate> coordinates_;
  std::vector<ComplexPair> pairs_;
  std::vector<std::string> constants_;
  std::vector<UnitSymbol> units_;
};

/// Throws std::invalid_argument unless both charts describe the same patch.
void require_same_chart(const Chart& a, const Chart& b);

}  // namespace gcv
