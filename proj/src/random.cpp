#include "whichway/random.hpp"

#include <cmath>

namespace whichway {

BlochVector random_unit_vector(Rng& rng) {
  std::normal_distribution<double> normal;
  BlochVector v;
  do {
    v = BlochVector(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

std::vector<double> random_probability_vector(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> exponential;
  std::vector<double> out(n);
  double total = 0.0;
  for (auto& v : out) {
    v = exponential(rng);
    total += v;
  }
  for (auto& v : out) v /= total;
  return out;
}

DetectorEnsemble random_ensemble(Rng& rng, std::size_t n, bool equal_populations) {
  std::vector<BlochVector> directions;
  for (std::size_t i = 0; i < n; ++i) directions.push_back(random_unit_vector(rng));
  if (equal_populations) return DetectorEnsemble::from_bloch(directions);
  auto populations = random_probability_vector(rng, n);
  // Absorb rounding so the sum is 1 to the last bit the constructor checks.
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) rest -= populations[i];
  populations.back() = rest;
  return DetectorEnsemble::from_bloch(directions, std::move(populations));
}

Measurement random_rank_one_povm(Rng& rng, std::size_t outcomes) {
  if (outcomes < 2) throw ValidationError("random_rank_one_povm: at least two outcomes");
  for (;;) {
    std::vector<RankOneElement> parts(outcomes - 1);
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    double total = 0.0;
    BlochVector balance = BlochVector::Zero();
    for (auto& p : parts) {
      p.direction = random_unit_vector(rng);
      p.weight = uniform(rng);
      total += p.weight;
    }
    for (auto& p : parts) {
      p.weight /= total;
      balance += p.weight * p.direction;
    }
    if (balance.norm() < 1e-6) continue;  // remainder would be degenerate
    const double scale = 1.0 / (1.0 + balance.norm());
    for (auto& p : parts) p.weight *= scale;
    auto m = complete_from_partial(parts);
    if (m.size() == outcomes) return m;
  }
}

}  // namespace whichway
