#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcv/dirac.hpp"

namespace gcv {

/// Local generalized complex structure: canonical generator ρ on a chart,
/// background 3-form H, and an optional unit symbol multiplying ρ.
struct GCModel {
  std::string name;
  Form rho;
  Form h;
  std::optional<std::string> unit;

  /// Throws std::invalid_argument when ρ = 0, dH ≠ 0 or the unit is undeclared.
  GCModel(std::string name, Form rho, std::optional<Form> h = std::nullopt,
          std::optional<std::string> unit = std::nullopt);

  const ChartPtr& chart() const { return rho.chart(); }
  /// The full generator, unit · ρ.
  Form spinor() const;
};

/// Coordinate values. Constants and units may be given too; they default to 1.
using Point = std::map<std::string, mpq_class>;
std::string format_point(const Point& p);

std::vector<Gauss> point_values(const Chart& chart, const Point& p);
/// Form with constant coefficients; throws std::domain_error at a pole.
Form evaluate_at(const Form& f, const Point& p);

struct PointedEvaluation {
  Point point;
  std::vector<GVec> basis;  // constant sections spanning the annihilator
  std::size_t dimension() const { return basis.size(); }
};

/// All constant X+ξ with (X+ξ)·ρ = 0 at the point.
PointedEvaluation annihilator_at(const GCModel& m, const Point& p);

struct PointCheck {
  Point point;
  std::size_t annihilator_dim = 0;
  Gauss pairing;        // coefficient of the chart volume form in (ρ, ρ̄)
  int orientation = 0;  // sign of i^{-n}(ρ, ρ̄) against the chart volume form
  int type = -1;
  std::string failure;  // empty when the point passes
};

struct PurityReport {
  std::vector<PointCheck> points;
  bool ok() const;
  /// "<point>: <condition>" for the first failing point, or "".
  std::string first_failure() const;
  /// True when the type has one parity on all points.
  bool parity_constant() const;
};

PurityReport check_pure_nondegenerate(const GCModel& m, const std::vector<Point>& points);

/// Lowest degree of ρ at the point.
int type_at(const GCModel& m, const Point& p);

/// Vanishing order at t = 0 of the degree-0 component of ρ restricted to the
/// line point + t·direction. Zero when the point is off the complex locus.
int degeneracy_order(const GCModel& m, const Point& p, const Point& direction);

class NotIntegrable : public std::runtime_error {
public:
  NotIntegrable() : std::runtime_error("not integrable over the rational-function ansatz") {}
};

struct IntegrabilityWitness {
  GVec witness;
  std::size_t dimension = 0;  // of the affine solution set
};

/// Solves dρ + H∧ρ = (X+ξ)·ρ over rational functions, free unknowns set to 0
/// in standard-frame order. Throws NotIntegrable for an inconsistent system.
IntegrabilityWitness integrability_witness(const GCModel& m);

/// ρ = e^β · Ω.
GCModel beta_model(std::string name, const Bivector& beta, const Form& omega_n0);

struct GluingReport {
  bool ok = false;
  int mismatch_degree = -1;
  Form pulled;    // substitute(lhs.ρ, map)
  Form expected;  // g e^B ∧ rhs.ρ
  std::string message;
};

/// Checks substitute(lhs.ρ, map) = g · e^B ∧ rhs.ρ. Throws std::invalid_argument
/// unless B is a closed real 2-form and g ≠ 0.
GluingReport verify_gluing(const GCModel& lhs, const GCModel& rhs, const SubstitutionRules& map,
                           const Scalar& g, const Form& b);

namespace models {

/// Coordinates x, y, u, v with w = x + iy and z = u + iv.
ChartPtr c2_chart(const std::string& name = "C2");
/// Cotangent chart: z = x + iy on the base, w = u + iv in the fibre. With
/// oriented = false the base coordinates are listed as (y, x).
ChartPtr cotangent_chart(const std::string& name, bool oriented = true);

GCModel complex_model(const ChartPtr& c2);            // dw∧dz
GCModel symplectic_model(const ChartPtr& c2);         // e^{iω}, ω = dx∧dy + du∧dv
GCModel typechange_model(const ChartPtr& c2);         // w + dw∧dz
/// e^{w^i ∂w∧∂z} dw∧dz = w^i + dw∧dz.
GCModel line_bundle_model(const ChartPtr& c2, int order);

struct Gluing {
  GCModel lhs;
  GCModel rhs;
  SubstitutionRules map;
  Scalar g;
  Form b;
};

/// Cotangent-bundle chart ρ_i = z^a + dz∧dw glued to ρ_0 = e^{iω} by
/// w ↦ z^a w, g = z^a, B = Re(dz∧dw).
Gluing divisor_gluing(int a, bool oriented = true);

}  // namespace models

}  // namespace gcv
