// Maximizing the average which-way information over qubit PVMs and rank-one
// POVMs, plus the known closed-form optima.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "whichway/criteria.hpp"
#include "whichway/measurement.hpp"

namespace whichway {

struct SearchConfig {
  int min_outcomes = 2;  // N_range, within [d, d^2] = [2, 4]
  int max_outcomes = 4;
  int restarts = 32;
  int grid_resolution = 64;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
  int threads = 1;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
};

struct TraceEntry {
  int outcomes = 0;
  int restart = 0;
  double score = 0.0;
};

struct OptimizationResult {
  Measurement best;
  Score score;
  bool is_pvm = false;
  std::optional<double> distinguishability;  // Bayes criterion only
  std::vector<TraceEntry> trace;
};

/// Average information of a rank-one qubit measurement without building a
/// PosteriorTable; agrees with average_information(posteriors(...)).
class QubitEvaluator {
 public:
  QubitEvaluator(const DetectorEnsemble& e, Criterion c);
  double operator()(std::span<const RankOneElement> elements) const;

 private:
  std::vector<BlochVector> directions_;
  std::vector<double> populations_;
  Criterion criterion_;
};

/// Best two-outcome PVM {(1 +- m.sigma)/2}: grid over the sphere, then local
/// refinement of the best grid points.
OptimizationResult optimize_pvm(const DetectorEnsemble& e, const Criterion& c,
                                const SearchConfig& cfg);

/// Best rank-one POVM with N in [min_outcomes, max_outcomes] outcomes.
OptimizationResult optimize_povm(const DetectorEnsemble& e, const Criterion& c,
                                 const SearchConfig& cfg);

/// D = 1 - 2 C_opt with C_opt the optimal average Bayes cost over POVMs.
double distinguishability(const DetectorEnsemble& e, const SearchConfig& cfg);

enum class ClosedForm { SymmetricPvm, TrineShannon, TrineBayes };

/// {(1 +- sigma_x)/2}, {(1 - n_i.sigma)/3} or {(1 + n_i.sigma)/3}; the trine
/// forms refer to the orientation of trine_ensemble().
Measurement closed_form(ClosedForm which);

/// Same, by name ("symmetric_pvm", "trine_shannon", "trine_bayes"); throws
/// ValidationError for unknown names.
Measurement closed_form(std::string_view name);

}  // namespace whichway
