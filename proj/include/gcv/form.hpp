#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gcv/chart.hpp"

namespace gcv {

using Mask = std::uint32_t;

int mask_degree(Mask m);
std::vector<std::size_t> mask_indices(Mask m);

/// Degree first, then lexicographic on the increasing index tuple.
struct MaskLess {
  bool operator()(Mask a, Mask b) const;
};

/// Sign of moving generator k to the front of the ordered product `m`
/// (k not in m): (-1)^{#indices of m below k}.
int insertion_sign(Mask m, std::size_t k);

/// Sign relating e^a ∧ e^b to e^{a|b}; 0 when a and b overlap.
int wedge_sign(Mask a, Mask b);

/// Inhomogeneous differential form on a chart. Components are keyed by the
/// bitmask of cobasis generators; zero components are never stored.
class Form {
public:
  using Components = std::map<Mask, Scalar, MaskLess>;

  explicit Form(ChartPtr chart) : chart_(std::move(chart)) {}

  static Form scalar(ChartPtr chart, Scalar s);
  static Form constant(ChartPtr chart, const Gauss& c);
  static Form generator(ChartPtr chart, std::size_t k);
  /// A single monomial s * e^{mask}.
  static Form monomial(ChartPtr chart, Mask mask, Scalar s);

  const ChartPtr& chart() const { return chart_; }
  const Components& components() const { return components_; }

  bool is_zero() const { return components_.empty(); }
  Scalar component(Mask m) const;
  Scalar scalar_part() const { return component(0); }
  /// Homogeneous part of degree k.
  Form part(int k) const;
  /// Lowest degree with a nonzero component, or -1 for the zero form.
  int min_degree() const;
  int max_degree() const;
  bool is_homogeneous(int k) const;
  bool is_even() const;

  void add(Mask m, const Scalar& s);

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  Form operator-() const;
  Form scaled(const Scalar& s) const;
  Form scaled(const Gauss& c) const;

  /// Coefficientwise conjugation; cobasis generators are real.
  Form conj() const;
  /// Reversal anti-automorphism: degree-k part times (-1)^{k(k-1)/2}.
  Form reversed() const;

  friend bool operator==(const Form& a, const Form& b);
  friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

private:
  ChartPtr chart_;
  Components components_;
};

Form wedge(const Form& a, const Form& b);
Form exterior_d(const Form& a);
/// Interior product with the vector whose frame components are `vec`
/// (component k pairs with cobasis generator k).
Form contract(const std::vector<Scalar>& vec, const Form& a);
/// Exponential of an even form with zero scalar part (terminating series).
Form exp_form(const Form& a);

/// Differential of a scalar as a 1-form.
Form differential(const ChartPtr& chart, const Scalar& s);

/// Complex 1-forms "d<w>" and "d<w>bar" for a declared pair, or a plain
/// cobasis generator by name. Throws for unknown names.
Form named_one_form(const ChartPtr& chart, const std::string& name);

/// Pullback data between two charts. Scalar rules are keyed by source
/// variable names or complex pair names (a pair rule fixes both real parts);
/// cobasis rules are keyed by source generator names. Unlisted symbols fall
/// back to the same-named target symbol; unlisted generators of non-angle
/// coordinates are derived from the coordinate's scalar image.
struct SubstitutionRules {
  ChartPtr source;
  ChartPtr target;
  std::map<std::string, Scalar> scalar_rules;
  std::map<std::string, Form> cobasis_rules;
};

Form substitute(const Form& a, const SubstitutionRules& rules);

/// Real and imaginary part of a Scalar whose variables are all real.
Scalar real_part(const Chart& chart, const Scalar& s);
Scalar imag_part(const Chart& chart, const Scalar& s);

}  // namespace gcv
