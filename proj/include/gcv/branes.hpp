#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcv/gcs.hpp"

namespace gcv {

/// Parametrized surface ι: Σ → M with a 2-form F on Σ. Every ambient
/// coordinate must be real and receive a Scalar on the surface chart.
struct BraneData {
  ChartPtr surface;
  std::map<std::string, Scalar> parametrization;
  Form f;

  /// Pullback rules from the ambient chart to the surface chart.
  SubstitutionRules pullback(const ChartPtr& ambient) const;
};

struct TauPoint {
  Point surface_point;
  Point ambient_point;
  std::size_t intersection = 0;  // complex dimension of τ_F ⊗ ℂ ∩ L
  std::string failure;
};

struct TauReport {
  std::vector<TauPoint> points;
  bool ok() const;
  std::string first_failure() const;
};

/// τ_F-invariance: dim(τ_F ⊗ ℂ ∩ L) = 2 at each surface point. Throws
/// std::invalid_argument when dF ≠ ι*H or the data is malformed.
TauReport tau_invariance_at(const GCModel& m, const BraneData& b, const std::vector<Point>& points);

struct FExtension {
  bool lagrangian = false;
  std::optional<Scalar> f;  // set when (u_y + v_x)/x is exact
  std::string message;
};

/// Graph (x, y) ↦ (x, y, u, v) over the first two surface coordinates.
/// Checks x(v_y − u_x) − y(u_y + v_x) = 0 and divides u_y + v_x by x.
FExtension f_extension(const ChartPtr& surface, const Scalar& u, const Scalar& v);

struct Tau0Report {
  bool ok = true;
  std::vector<std::string> details;  // one line per conormal generator
};

/// Σ = {normal coordinates = 0}. Checks e^P(N*Σ) ⊆ TΣ ⊕ N*Σ along Σ with P = β + β̄.
Tau0Report tau0_preserved(const Bivector& beta, const std::vector<std::string>& normal);

struct BraneTopology {
  bool orientable = true;
  int genus = 0;  // crosscap number when non-orientable
  int n = 0;      // transversal intersections with the complex locus
  int k = 0;      // positive intersections, oriented case

  int euler_characteristic() const;
};

/// Euler number of the normal bundle, n − χ(Σ). Throws on invalid records.
int normal_euler(const BraneTopology& t);

}  // namespace gcv
