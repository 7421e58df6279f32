// Information criteria: per-outcome scores F(Q) and their prior-weighted
// average.
#pragma once

#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "whichway/measurement.hpp"

namespace whichway {

enum class CriterionKind { Shannon, Bayes, RmsSpread };

class Criterion {
 public:
  static Criterion shannon(double log_base = std::numbers::e);
  static Criterion bayes();
  static Criterion rms_spread();

  /// "shannon", "bayes" or "rms_spread"; throws ValidationError otherwise.
  static Criterion parse(std::string_view name);

  CriterionKind kind() const { return kind_; }
  double log_base() const { return log_base_; }
  std::string name() const;

  /// F(Q) without validating Q. Shannon: sum Q log Q; Bayes: max Q - 1;
  /// RmsSpread: sqrt(n/(n-1) sum (Q - 1/n)^2).
  double evaluate(std::span<const double> posterior) const;

 private:
  explicit Criterion(CriterionKind kind, double log_base = std::numbers::e);

  CriterionKind kind_;
  double log_base_;
};

const std::vector<Criterion>& all_criteria();

/// F of one posterior column; throws ValidationError unless entries are >= 0
/// and sum to 1 within kValidityTolerance.
double score_outcome(const Criterion& c, std::span<const double> posterior);

/// Bayes guess j(mu): lowest index among the maximizers.
std::size_t bayes_guess(std::span<const double> posterior);

struct Score {
  std::vector<double> per_outcome;  // 0 for masked outcomes
  double average = 0.0;
};

Score average_information(const Criterion& c, const PosteriorTable& t);

/// max_mu |K_mu - (1 - 2 C_mu)| over supported outcomes of a two-beam table.
double bayes_rms_identity_check(const PosteriorTable& t);
double bayes_rms_identity_defect(std::span<const double> posterior);

/// lambda F(Q') + (1 - lambda) F(Q'') - F(lambda Q' + (1 - lambda) Q'').
double convexity_probe(const Criterion& c, std::span<const double> q1, std::span<const double> q2,
                       double lambda);

}  // namespace whichway
