// Two-beam fringe pattern, operational visibility and the D^2 + V^2
// complementarity check.
#pragma once

#include <numbers>

#include "whichway/optimizer.hpp"

namespace whichway {

struct FringeModel {
  DetectorEnsemble ensemble;
  double phase_gradient = 2.0 * std::numbers::pi;  // kappa, radians per screen unit
  int samples = 256;
  double screen_lo = 0.0;
  double screen_hi = 1.0;

  /// Two beams, samples >= 16, kappa > 0 and a screen covering a full period.
  void validate() const;
};

/// I(x) = zeta_1 + zeta_2 + 2 sqrt(zeta_1 zeta_2) Re[e^{i kappa x} <chi_1|chi_2>].
double fringe_intensity(const FringeModel& f, double x);

/// (I_max - I_min) / (I_max + I_min) from sampled extrema over one fringe
/// period, each refined by golden-section search around the best sample.
double visibility(const FringeModel& f);

/// 2 sqrt(zeta_1 zeta_2) |<chi_1|chi_2>|.
double closed_form_visibility(const DetectorEnsemble& e);

struct ComplementarityReport {
  double V = 0.0;
  double D = 0.0;
  double sum = 0.0;  // D^2 + V^2
  double defect_from_unity = 0.0;
  bool equal_populations = true;

  /// |D^2 + V^2 - 1| < tol for equal populations, D^2 + V^2 <= 1 + tol otherwise.
  bool holds(double tol = 1e-6) const;
};

ComplementarityReport complementarity_check(const DetectorEnsemble& e, const SearchConfig& cfg);

}  // namespace whichway
