// Comparing qubit POVMs as physical measurements: up to outcome order,
// merging of parallel elements and symmetries of the detector ensemble.
#pragma once

#include <span>
#include <vector>

#include "whichway/measurement.hpp"

namespace whichway {

/// Rank-one elements with parallel directions (|d - d'| <= direction_tol)
/// merged and elements lighter than weight_floor dropped; sorted by
/// descending weight. General-form inputs are rank-one refined first.
std::vector<RankOneElement> merged_elements(const Measurement& m, double direction_tol,
                                            double weight_floor);

/// Orthogonal maps of the Bloch ball (rotations and reflections) that permute
/// the ensemble's Bloch vectors among states of equal population. Always
/// contains the identity. Qubit ensembles only.
std::vector<Eigen::Matrix3d> ensemble_symmetries(const DetectorEnsemble& e, double tol = 1e-9);

/// True when some symmetry O (identity included) maps b onto a, up to outcome
/// permutation and merging, with weights and directions matching within tol.
bool equivalent(const Measurement& a, const Measurement& b, double tol = 1e-6,
                std::span<const Eigen::Matrix3d> symmetries = {});

}  // namespace whichway
