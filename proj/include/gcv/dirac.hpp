#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gcv/form.hpp"

namespace gcv {

/// Section X + ξ of TM ⊕ T*M. `vec` holds components in the frame dual to
/// the cobasis, `cov` the cobasis components of ξ.
struct GVec {
  ChartPtr chart;
  std::vector<Scalar> vec;
  std::vector<Scalar> cov;

  static GVec zero(ChartPtr chart);
  static GVec from_vector(ChartPtr chart, std::vector<Scalar> vec);
  /// ξ from a homogeneous 1-form.
  static GVec from_covector(const Form& xi);
  /// ∂ for a coordinate, ∂w / ∂wbar for a complex pair.
  static GVec partial(ChartPtr chart, const std::string& name);

  Form covector_form() const;
  bool is_zero() const;
  bool is_constant() const;
  GVec conj() const;
  GVec scaled(const Scalar& s) const;
  GVec scaled(const Gauss& c) const;

  GVec& operator+=(const GVec& other);
  GVec& operator-=(const GVec& other);
  friend GVec operator+(GVec a, const GVec& b) { return a += b; }
  friend GVec operator-(GVec a, const GVec& b) { return a -= b; }
  GVec operator-() const { return scaled(Gauss(-1)); }
  friend bool operator==(const GVec& a, const GVec& b);
  friend bool operator!=(const GVec& a, const GVec& b) { return !(a == b); }
};

/// Named basis of TM ⊕ T*M used for reporting and for linear solves. With
/// complex pairs the order is ∂w, ∂wbar, ..., dw, dwbar, ...; real
/// coordinates not in a pair follow their pair-free position.
struct FrameElement {
  std::string name;
  GVec value;
};
std::vector<FrameElement> standard_frame(const ChartPtr& chart);
/// Coefficients of u in the standard frame.
std::vector<Scalar> frame_coordinates(const GVec& u);

/// Antisymmetric bivector Σ_{i<j} β^{ij} e_i ∧ e_j in the frame dual to the cobasis.
class Bivector {
public:
  explicit Bivector(ChartPtr chart) : chart_(std::move(chart)) {}

  static Bivector wedge(const GVec& x, const GVec& y);

  const ChartPtr& chart() const { return chart_; }
  const std::map<std::pair<std::size_t, std::size_t>, Scalar>& components() const { return comps_; }
  Scalar component(std::size_t i, std::size_t j) const;
  void add(std::size_t i, std::size_t j, const Scalar& s);

  bool is_zero() const { return comps_.empty(); }
  Bivector conj() const;
  Bivector scaled(const Scalar& s) const;
  Bivector& operator+=(const Bivector& other);
  friend Bivector operator+(Bivector a, const Bivector& b) { return a += b; }
  friend bool operator==(const Bivector& a, const Bivector& b);

  /// Vector i_ξ β with the leftmost-slot convention.
  std::vector<Scalar> apply(const std::vector<Scalar>& xi) const;

private:
  ChartPtr chart_;
  std::map<std::pair<std::size_t, std::size_t>, Scalar> comps_;
};

/// ⟨X+ξ, Y+η⟩ = ½(η(X) + ξ(Y)).
Scalar pairing(const GVec& u, const GVec& v);
/// (X+ξ)·ρ = i_X ρ + ξ∧ρ.
Form clifford(const GVec& u, const Form& rho);

/// X(f) for frame components X.
Scalar apply_vector(const ChartPtr& chart, const std::vector<Scalar>& x, const Scalar& f);
std::vector<Scalar> lie_bracket(const ChartPtr& chart, const std::vector<Scalar>& x, const std::vector<Scalar>& y);
/// Cartan's formula L_X = i_X d + d i_X.
Form lie_derivative(const std::vector<Scalar>& x, const Form& a);

/// H-twisted Courant bracket; throws std::invalid_argument if dH ≠ 0.
GVec courant(const GVec& u, const GVec& v, const Form& h);

/// Top-degree part of ρ^⊤ ∧ σ.
Form mukai(const Form& rho, const Form& sigma);

/// e^B ∧ ρ; throws unless B is a 2-form.
Form b_transform(const Form& b, const Form& rho);
/// X + ξ ↦ X + ξ − i_X B.
GVec b_transform(const Form& b, const GVec& u);

/// i_β with i_{X∧Y} = i_Y ∘ i_X.
Form contract(const Bivector& beta, const Form& a);
/// e^β·ρ = Σ (i_β)^k ρ / k!.
Form beta_transform(const Bivector& beta, const Form& rho);
/// X + ξ ↦ X + i_ξ β + ξ, the action intertwining beta_transform on spinors.
GVec beta_transform(const Bivector& beta, const GVec& u);

}  // namespace gcv
