#include "whichway/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace whichway {

Criterion::Criterion(CriterionKind kind, double log_base) : kind_(kind), log_base_(log_base) {}

Criterion Criterion::shannon(double log_base) {
  if (!(log_base > 1.0) || !std::isfinite(log_base)) {
    throw ValidationError("criterion: logarithm base must be > 1");
  }
  return Criterion(CriterionKind::Shannon, log_base);
}

Criterion Criterion::bayes() { return Criterion(CriterionKind::Bayes); }

Criterion Criterion::rms_spread() { return Criterion(CriterionKind::RmsSpread); }

Criterion Criterion::parse(std::string_view name) {
  if (name == "shannon") return shannon();
  if (name == "bayes") return bayes();
  if (name == "rms_spread" || name == "rms") return rms_spread();
  throw ValidationError("criterion: unknown name '" + std::string(name) +
                        "' (expected shannon, bayes or rms_spread)");
}

std::string Criterion::name() const {
  switch (kind_) {
    case CriterionKind::Shannon: return "shannon";
    case CriterionKind::Bayes: return "bayes";
    case CriterionKind::RmsSpread: return "rms_spread";
  }
  return "unknown";
}

double Criterion::evaluate(std::span<const double> unordered) const {
  // Summing in sorted order makes the result bit-identical under permutations.
  std::array<double, 16> buffer;
  std::vector<double> heap;
  std::span<double> posterior;
  if (unordered.size() <= buffer.size()) {
    posterior = std::span<double>(buffer.data(), unordered.size());
  } else {
    heap.resize(unordered.size());
    posterior = heap;
  }
  std::copy(unordered.begin(), unordered.end(), posterior.begin());
  std::sort(posterior.begin(), posterior.end());
  switch (kind_) {
    case CriterionKind::Shannon: {
      double sum = 0.0;
      for (double v : posterior) {
        if (v > 0.0) sum += v * std::log(v);
      }
      return sum / std::log(log_base_);
    }
    case CriterionKind::Bayes:
      return *std::max_element(posterior.begin(), posterior.end()) - 1.0;
    case CriterionKind::RmsSpread: {
      const double n = static_cast<double>(posterior.size());
      double sum = 0.0;
      for (double v : posterior) sum += (v - 1.0 / n) * (v - 1.0 / n);
      return std::sqrt(n / (n - 1.0) * sum);
    }
  }
  return 0.0;
}

const std::vector<Criterion>& all_criteria() {
  static const std::vector<Criterion> criteria{Criterion::shannon(), Criterion::bayes(),
                                               Criterion::rms_spread()};
  return criteria;
}

namespace {

void check_probability_vector(std::span<const double> v, const char* where) {
  if (v.size() < 2) {
    throw ValidationError(std::string(where) + ": at least two beams required");
  }
  double total = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError(std::string(where) + ": negative or non-finite probability");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kValidityTolerance) {
    std::ostringstream msg;
    msg << where << ": probabilities sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
}

}  // namespace

double score_outcome(const Criterion& c, std::span<const double> posterior) {
  check_probability_vector(posterior, "score_outcome");
  return c.evaluate(posterior);
}

std::size_t bayes_guess(std::span<const double> posterior) {
  return static_cast<std::size_t>(
      std::distance(posterior.begin(), std::max_element(posterior.begin(), posterior.end())));
}

Score average_information(const Criterion& c, const PosteriorTable& t) {
  Score s;
  s.per_outcome.assign(t.outcomes(), 0.0);
  for (std::size_t mu = 0; mu < t.outcomes(); ++mu) {
    if (!t.support[mu]) continue;
    const auto col = t.column(mu);
    s.per_outcome[mu] = c.evaluate(col);
    s.average += t.q(static_cast<Eigen::Index>(mu)) * s.per_outcome[mu];
  }
  return s;
}

double bayes_rms_identity_defect(std::span<const double> posterior) {
  if (posterior.size() != 2) throw ValidationError("K = 1 - 2C identity needs exactly two beams");
  const double k = Criterion::rms_spread().evaluate(posterior);
  const double cost = -Criterion::bayes().evaluate(posterior);
  return std::abs(k - (1.0 - 2.0 * cost));
}

double bayes_rms_identity_check(const PosteriorTable& t) {
  if (t.beams() != 2) throw ValidationError("K = 1 - 2C identity needs exactly two beams");
  double worst = 0.0;
  for (std::size_t mu = 0; mu < t.outcomes(); ++mu) {
    if (t.support[mu]) worst = std::max(worst, bayes_rms_identity_defect(t.column(mu)));
  }
  return worst;
}

double convexity_probe(const Criterion& c, std::span<const double> q1, std::span<const double> q2,
                       double lambda) {
  if (q1.size() != q2.size()) throw ValidationError("convexity_probe: length mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("convexity_probe: lambda not in [0,1]");
  check_probability_vector(q1, "convexity_probe");
  check_probability_vector(q2, "convexity_probe");
  std::vector<double> mix(q1.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = lambda * q1[i] + (1.0 - lambda) * q2[i];
  return lambda * c.evaluate(q1) + (1.0 - lambda) * c.evaluate(q2) - c.evaluate(mix);
}

}  // namespace whichway
