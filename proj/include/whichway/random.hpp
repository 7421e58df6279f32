// Seeded generators of random states, ensembles and measurements.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "whichway/measurement.hpp"

namespace whichway {

using Rng = std::mt19937_64;

BlochVector random_unit_vector(Rng& rng);

/// Uniform point of the probability simplex with `n` entries.
std::vector<double> random_probability_vector(Rng& rng, std::size_t n);

/// Qubit ensemble with Haar-random states; populations uniform on the
/// simplex, or all 1/n when `equal_populations`.
DetectorEnsemble random_ensemble(Rng& rng, std::size_t n, bool equal_populations);

/// Valid rank-one qubit POVM with exactly `outcomes` elements (>= 2): random
/// directions and weights for outcomes-1 elements, scaled so that the
/// completion of the identity is one rank-one element.
Measurement random_rank_one_povm(Rng& rng, std::size_t outcomes);

}  // namespace whichway
