// Derivative-free maximization: golden-section line searches along the
// coordinate axes with a shrinking bracket.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace whichway {

using Objective = std::function<double(std::span<const double>)>;

/// Maximizes f on [lo, hi] assuming unimodality; stops once the bracket is
/// narrower than `width`. Returns the abscissa of the best point evaluated.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double width, double* best_value = nullptr);

struct LocalSearchOptions {
  double initial_step = 0.5;
  double tolerance = 1e-8;  // final bracket half-width
  int max_sweeps = 4000;
};

struct LocalSearchResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
  int sweeps = 0;
};

/// Cyclic coordinate golden-section ascent. After each sweep a line search
/// along the sweep's net displacement is tried. The bracket half-width halves
/// whenever a sweep stops improving and the search ends below `tolerance`.
/// `rechart`, when set, runs before every sweep and may re-express x in a
/// different chart of the same point (the objective must follow along).
LocalSearchResult maximize_coordinatewise(
    const Objective& f, std::vector<double> x, const LocalSearchOptions& options,
    const std::function<void(std::vector<double>&)>& rechart = {});

}  // namespace whichway
