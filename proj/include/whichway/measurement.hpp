// Finite-outcome POVMs: representation, validity, outcome statistics and
// rank-one refinement.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "whichway/quantum_core.hpp"

namespace whichway {

/// Tolerance for POVM positivity, completeness and projector checks.
inline constexpr double kValidityTolerance = 1e-10;

/// Eigenvalues below this are treated as zero when splitting operators into
/// rank-one pieces.
inline constexpr double kEigenvalueFloor = 1e-12;

/// The qubit operator weight * (1 + direction . sigma).
struct RankOneElement {
  double weight = 0.0;
  BlochVector direction = BlochVector::UnitZ();
};

ComplexMatrix to_matrix(const RankOneElement& e);

class InfeasibleCompletion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMeasurement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A list of operators on a common space. Construction checks shape only;
/// POVM validity is a separate question answered by validate().
class Measurement {
 public:
  static Measurement from_matrices(std::vector<ComplexMatrix> elements);

  /// Each element needs weight > 0 and a unit direction (ValidationError
  /// otherwise).
  static Measurement from_rank_one(std::vector<RankOneElement> elements);

  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return dim_; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const ComplexMatrix& operator[](std::size_t mu) const { return elements_[mu]; }

  bool has_rank_one_form() const { return rank_one_.has_value(); }
  /// Throws std::logic_error when the measurement was built from matrices.
  const std::vector<RankOneElement>& rank_one() const;

  /// The (alpha, m) form when every element is a rank-one qubit operator
  /// within `tol`; uses the stored form when present.
  std::optional<std::vector<RankOneElement>> as_rank_one(double tol = kValidityTolerance) const;

 private:
  Measurement() = default;

  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> elements_;
  std::optional<std::vector<RankOneElement>> rank_one_;
};

struct ValidityReport {
  double psd_defect = 0.0;           // max over elements of max(0, -lambda_min) and non-Hermiticity
  double completeness_defect = 0.0;  // || sum A - 1 ||
  std::optional<double> weight_sum_defect;  // |sum alpha - 1|, rank-one form only
  std::optional<double> balance_defect;     // |sum alpha m|, rank-one form only
  bool valid = false;
  bool is_pvm = false;
};

ValidityReport validate(const Measurement& m);

/// Idempotent, mutually orthogonal elements. Throws InvalidMeasurement when
/// `m` is not a valid POVM.
bool is_pvm(const Measurement& m);

/// Outcome probabilities and Bayes posteriors for one (ensemble,
/// measurement) pair. Rows index beams, columns index outcomes.
struct PosteriorTable {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  Eigen::MatrixXd Q;          // zero columns where the outcome is masked
  std::vector<bool> support;  // q_mu > 0

  std::size_t beams() const { return static_cast<std::size_t>(P.rows()); }
  std::size_t outcomes() const { return static_cast<std::size_t>(P.cols()); }
  std::vector<double> column(std::size_t mu) const;
};

/// P_{i mu} = Tr[A_mu rho_i]. Takes the Bloch fast path when both sides
/// allow it.
Eigen::MatrixXd outcome_probabilities(const DetectorEnsemble& e, const Measurement& m);
Eigen::MatrixXd outcome_probabilities_trace(const DetectorEnsemble& e, const Measurement& m);
Eigen::MatrixXd outcome_probabilities_bloch(const DetectorEnsemble& e, const Measurement& m);

PosteriorTable posteriors(const DetectorEnsemble& e, const Measurement& m);
PosteriorTable posteriors_from_probabilities(std::span<const double> populations,
                                             const Eigen::MatrixXd& P);

/// Splits each element into rank-one spectral pieces (eigenvalues below
/// kEigenvalueFloor dropped). Degenerate eigenspaces use the basis obtained by
/// projecting the standard basis vectors, pieces ordered by descending
/// eigenvalue and then lexicographically by eigenvector.
Measurement rank_one_refine(const Measurement& m);

/// Appends the spectral decomposition of 1 - sum(parts). Throws
/// InfeasibleCompletion when the remainder is not PSD within
/// kValidityTolerance.
Measurement complete_from_partial(std::span<const RankOneElement> parts);

/// Remainder pieces only (larger eigenvalue first), no validation of the
/// parts themselves.
std::vector<RankOneElement> completion_remainder(std::span<const RankOneElement> parts);

}  // namespace whichway
