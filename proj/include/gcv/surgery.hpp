#pragma once

#include <string>
#include <vector>

#include "gcv/branes.hpp"
#include "gcv/gcs.hpp"

namespace gcv {

/// Blow-up of w + dw∧dz at the origin. Chart 1 has coordinates (w, zt) with
/// z = w·zt, chart 2 has (wt, z) with w = wt·z.
struct BlowupCharts {
  GCModel base;    // w + dw∧dz
  GCModel chart1;  // 1 + dw∧dzt
  GCModel chart2;  // wt + dwt∧dz
  SubstitutionRules pi1;
  SubstitutionRules pi2;
};

BlowupCharts build_blowup();

struct ChartCheck {
  std::string chart;
  std::string factor;  // complex coordinate expected as proportionality factor
  bool ok = false;
  std::string message;
};

struct BlowupReport {
  std::vector<ChartCheck> charts;
  bool ok() const;
};

/// π_k^*ρ equals the exceptional coordinate times the chart spinor, exactly.
BlowupReport verify_blowup_holomorphic(const BlowupCharts& b);

/// Zero section {w = 0} of chart 1, parametrized by zt = s + it, with F = 0.
BraneData exceptional_brane(const BlowupCharts& b);

struct BlowdownReport {
  bool ok = false;
  TauReport tau;
  int normal_euler = 0;
  bool complex_locus = false;  // type 2 along {wt = 0} in chart 2, 0 off it
  std::vector<std::string> details;
};

/// The exceptional sphere is a brane with F = 0 at the surface points and has
/// normal Euler number −1; chart 2 has type 2 exactly at the sampled points
/// with wt = 0. Throws std::invalid_argument when the brane does not live on
/// chart 1 or a point list is empty.
BlowdownReport verify_blowdown_model(const BlowupCharts& b, const BraneData& brane, const std::vector<Point>& surface,
                                     const std::vector<Point>& chart2);

/// Near-torus data for the multiplicity-zero log transform. p stands for π².
struct LogTransformData {
  ChartPtr u0;  // r, angles th1..th3; units R = e^{2p r²/A}, F = e^{i th2}
  ChartPtr u1;  // rt (log, λ = d log rt), angles tt1..tt3; unit E = e^{i tt1}
  Form omega;   // r dr∧dth1 + A/(4p) dth2∧dth3
  GCModel rho0;
  GCModel rho1;   // rt·E·(1 + exponent)
  Form exponent;  // κ(λ + i dtt1)∧(dtt2 + i dtt3), κ = A/(4p)
  Form b01;       // −r dr∧dth3 − A/(4p) dth1∧dth2
  SubstitutionRules phi;  // U1 → U0
  Scalar kappa;           // on U0
};

LogTransformData build_logtransform();

struct LogGluingReport {
  bool ok = false;
  Form lhs;  // B01 + φ*exponent
  Form rhs;  // iω
  std::vector<std::string> mismatches;  // "<generators>: <lhs> vs <rhs>"
  Scalar prefactor;                     // φ*(rt·E)
  bool prefactor_units = false;
  bool cross_multiplied = false;  // e^{B01}∧φ*ρ1 = prefactor·e^{iω}
  bool rules_consistent = false;  // explicit cobasis rules match d of the scalar rules
};

LogGluingReport verify_logtransform_gluing(const LogTransformData& d);

struct HClass {
  Scalar coefficient;  // dth1∧dth2 channel of B01 on the r = const torus
  std::string direction;
  std::vector<std::pair<std::string, Scalar>> pairings;  // per angle 1-form
};

/// orientation = −1 reverses the θ3 circle.
HClass h_class_coefficient(const LogTransformData& d, int orientation = 1);

}  // namespace gcv
