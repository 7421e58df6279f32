// Constructive reductions of qubit POVMs: symmetrization into the plane of
// the detector states, mirror symmetrization about the z axis, doubling into
// a mixture of PVMs, and the pairwise merging that ends at the optimal PVM
// of two equally populated symmetric beams.
#pragma once

#include <string>
#include <vector>

#include "whichway/criteria.hpp"
#include "whichway/measurement.hpp"

namespace whichway {

class NonCoplanarEnsemble : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Unit normal of the plane through the origin spanned by the ensemble's
/// Bloch vectors; y-hat whenever the xz plane contains them all. Throws
/// NonCoplanarEnsemble when the vectors span three dimensions.
BlochVector ensemble_plane_normal(const DetectorEnsemble& e);

/// Replaces every element off the plane by two half-weight elements, the
/// original and its mirror image through the plane.
Measurement mirror_about_plane(const Measurement& m, const BlochVector& normal);

/// Moves every rank-one element into the plane of the ensemble. Each element
/// off the plane becomes a mirror pair, and each mirror pair is replaced by
/// the two in-plane unit vectors u, v with u + v = 2 * (in-plane projection),
/// keeping the half weights. Never lowers the average information of a
/// convex criterion.
Measurement symmetrize_to_plane(const Measurement& m, const DetectorEnsemble& e);

/// Two elements with equal weight whose directions are mirror images in the
/// xz plane about the z axis: (x, 0, z) and (-x, 0, z).
struct MirrorPair {
  RankOneElement primed;
  RankOneElement double_primed;
};

class SymmetricPovm {
 public:
  /// Throws ValidationError when a pair is not mirror symmetric within
  /// kValidityTolerance.
  explicit SymmetricPovm(std::vector<MirrorPair> pairs);

  const std::vector<MirrorPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  /// Element weight shared by both members of pair k.
  double weight(std::size_t k) const { return pairs_[k].primed.weight; }

  /// Common z component of pair k.
  double height(std::size_t k) const { return pairs_[k].primed.direction.z(); }

  double symmetry_defect() const;
  Measurement flatten() const;

  static double defect_of(const MirrorPair& p);

 private:
  std::vector<MirrorPair> pairs_;
};

/// Each element C = (alpha, m) becomes the pair (alpha/2, m), (alpha/2, m'')
/// with m'' = (-m_x, 0, m_z). Elements must lie in the xz plane; weights below
/// kEigenvalueFloor are dropped.
SymmetricPovm symmetrize_about_axis(const Measurement& m);

/// {(alpha/2, m), (alpha/2, -m)} for every rank-one element (alpha, m).
Measurement durr_doubling(const Measurement& m);

/// Information function of a mirror pair at height x for the symmetric
/// two-beam ensemble at angle theta. With a = 1 + x cos(theta) and
/// b = sqrt(1 - x^2) sin(theta):
///   g = a log a - (a+b)/2 log((a+b)/2) - (a-b)/2 log((a-b)/2),
/// with 0 log 0 = 0.
double g_function(double x, double theta);

/// Merges pairs i and j into one pair of weight alpha_i + alpha_j at the
/// weighted mean height; the primed member gets u_x >= 0. The merged pair
/// takes position min(i, j).
SymmetricPovm reduce_pair(const SymmetricPovm& s, std::size_t i, std::size_t j);

struct ReductionStep {
  std::string stage;
  Measurement snapshot;
  double information = 0.0;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  Measurement terminal;
};

/// Plane symmetrization, axis symmetrization and repeated pair merging (the
/// two heaviest pairs first) of a rank-one POVM, scored with the Shannon
/// criterion on symmetric_pair(theta). A stage is recorded only when it
/// changes the measurement.
ReductionTrace reduce_to_pvm(const Measurement& m, double theta);

/// Average information of each trace snapshot under another criterion.
std::vector<double> rescore_trace(const ReductionTrace& trace, const DetectorEnsemble& e,
                                  const Criterion& c);

}  // namespace whichway
