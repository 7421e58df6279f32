#include "whichway/local_search.hpp"

#include <algorithm>
#include <cmath>

namespace whichway {

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double width, double* best_value) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; b - a > width && it < 200; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const bool left = fc >= fd;
  if (best_value) *best_value = left ? fc : fd;
  return left ? c : d;
}

LocalSearchResult maximize_coordinatewise(const Objective& f, std::vector<double> x,
                                          const LocalSearchOptions& options,
                                          const std::function<void(std::vector<double>&)>& rechart) {
  LocalSearchResult result;
  auto eval = [&](std::span<const double> p) {
    ++result.evaluations;
    return f(p);
  };
  if (rechart) rechart(x);
  double value = eval(x);
  double step = options.initial_step;
  std::vector<double> trial(x.size());

  while (step >= options.tolerance && result.sweeps < options.max_sweeps) {
    ++result.sweeps;
    if (rechart) {
      rechart(x);
      value = eval(x);
    }
    const std::vector<double> start = x;
    const double start_value = value;
    const double width = std::max(options.tolerance, 0.01 * step);

    for (std::size_t j = 0; j < x.size(); ++j) {
      trial = x;
      auto along = [&](double t) {
        trial[j] = x[j] + t;
        return eval(trial);
      };
      double best = 0.0;
      const double t = golden_section_max(along, -step, step, width, &best);
      if (best > value) {
        x[j] += t;
        value = best;
      }
    }

    std::vector<double> direction(x.size());
    double length = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      direction[j] = x[j] - start[j];
      length += direction[j] * direction[j];
    }
    if (length > 0.0) {
      auto along = [&](double t) {
        for (std::size_t j = 0; j < x.size(); ++j) trial[j] = x[j] + t * direction[j];
        return eval(trial);
      };
      double best = 0.0;
      const double t = golden_section_max(along, -0.5, 2.0, 1e-3, &best);
      if (best > value) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += t * direction[j];
        value = best;
      }
    }

    if (value - start_value <= 1e-15 * std::max(1.0, std::abs(value))) step *= 0.5;
  }
  result.x = std::move(x);
  result.value = value;
  return result;
}

}  // namespace whichway
