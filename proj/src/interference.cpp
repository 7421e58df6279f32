#include "whichway/interference.hpp"

#include <algorithm>
#include <cmath>

#include "whichway/local_search.hpp"

namespace whichway {

namespace {

constexpr double kRefineWidth = 1e-12;

double period(const FringeModel& f) { return 2.0 * std::numbers::pi / f.phase_gradient; }

}  // namespace

void FringeModel::validate() const {
  if (ensemble.size() != 2) throw ValidationError("fringe model: exactly two beams required");
  if (samples < 16) throw ValidationError("fringe model: at least 16 samples required");
  if (!(phase_gradient > 0.0) || !std::isfinite(phase_gradient)) {
    throw ValidationError("fringe model: phase gradient must be positive");
  }
  if (!(screen_hi - screen_lo >= period(*this) * (1.0 - 1e-12))) {
    throw ValidationError("fringe model: screen range shorter than one fringe period");
  }
}

double fringe_intensity(const FringeModel& f, double x) {
  const auto& z = f.ensemble.populations();
  const Complex chi = overlap(f.ensemble.states()[0], f.ensemble.states()[1]);
  const Complex phase = std::polar(1.0, f.phase_gradient * x);
  const double value = z[0] + z[1] + 2.0 * std::sqrt(z[0] * z[1]) * (phase * chi).real();
  return std::max(0.0, value);
}

double visibility(const FringeModel& f) {
  f.validate();
  const double lo = f.screen_lo;
  const double step = period(f) / f.samples;
  auto intensity = [&](double x) { return fringe_intensity(f, x); };

  int arg_max = 0;
  int arg_min = 0;
  double i_max = intensity(lo);
  double i_min = i_max;
  for (int s = 1; s < f.samples; ++s) {
    const double v = intensity(lo + s * step);
    if (v > i_max) i_max = v, arg_max = s;
    if (v < i_min) i_min = v, arg_min = s;
  }
  const double x_max = lo + arg_max * step;
  const double x_min = lo + arg_min * step;
  double refined = i_max;
  golden_section_max(intensity, x_max - step, x_max + step, kRefineWidth, &refined);
  i_max = std::max(i_max, refined);
  refined = -i_min;
  golden_section_max([&](double x) { return -intensity(x); }, x_min - step, x_min + step, kRefineWidth,
                     &refined);
  i_min = std::min(i_min, -refined);

  const double total = i_max + i_min;
  return total > 0.0 ? std::clamp((i_max - i_min) / total, 0.0, 1.0) : 0.0;
}

double closed_form_visibility(const DetectorEnsemble& e) {
  if (e.size() != 2) throw ValidationError("visibility: exactly two beams required");
  const auto& z = e.populations();
  return 2.0 * std::sqrt(z[0] * z[1]) * std::abs(overlap(e.states()[0], e.states()[1]));
}

bool ComplementarityReport::holds(double tol) const {
  return equal_populations ? defect_from_unity < tol : sum <= 1.0 + tol;
}

ComplementarityReport complementarity_check(const DetectorEnsemble& e, const SearchConfig& cfg) {
  ComplementarityReport r;
  r.V = visibility(FringeModel{e});
  r.D = distinguishability(e, cfg);
  r.sum = r.D * r.D + r.V * r.V;
  r.defect_from_unity = std::abs(r.sum - 1.0);
  const auto& z = e.populations();
  r.equal_populations = std::abs(z[0] - z[1]) <= kStateTolerance;
  return r;
}

}  // namespace whichway
