// Qubit states, Bloch vectors, Hermitian-operator predicates and detector
// ensembles.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace whichway {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using BlochVector = Eigen::Vector3d;

/// Norm tolerance for pure states, Bloch vectors and ensemble populations.
inline constexpr double kStateTolerance = 1e-12;

/// Thrown when a value does not satisfy the invariants of the type it is
/// being turned into.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_hermitian(const ComplexMatrix& m, double tol = kStateTolerance);
bool is_psd(const ComplexMatrix& m, double tol = kStateTolerance);
bool is_unitary(const ComplexMatrix& m, double tol = kStateTolerance);

/// Eigenvalues of the Hermitian part of `m`, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

/// Largest absolute eigenvalue of the Hermitian part of `m`.
double hermitian_norm(const ComplexMatrix& m);

/// sigma_x, sigma_y, sigma_z.
const std::array<Eigen::Matrix2cd, 3>& pauli();

/// v . sigma for an arbitrary real 3-vector.
Eigen::Matrix2cd pauli_dot(const BlochVector& v);

/// Kronecker product a (x) b, row index = ia * rows(b) + ib.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// A normalized vector in a finite-dimensional Hilbert space.
class PureState {
 public:
  /// Throws ValidationError unless the amplitudes have unit norm within
  /// kStateTolerance.
  explicit PureState(ComplexVector amplitudes);

  /// Rescales `amplitudes` to unit norm; throws on the zero vector.
  static PureState normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  ComplexMatrix density() const;

 private:
  ComplexVector amplitudes_;
};

/// Pure qubit state with Bloch vector `v`. The first nonzero amplitude is
/// real and positive.
PureState bloch_to_state(const BlochVector& v);

/// Components <s|sigma_k|s>. Requires a qubit state.
BlochVector state_to_bloch(const PureState& s);

/// <a|b>.
Complex overlap(const PureState& a, const PureState& b);

/// Pure detector states together with the beam populations zeta_i.
class DetectorEnsemble {
 public:
  DetectorEnsemble(std::vector<PureState> states, std::vector<double> populations);

  /// Qubit ensemble from unit Bloch vectors.
  static DetectorEnsemble from_bloch(const std::vector<BlochVector>& directions,
                                     std::vector<double> populations);

  /// Equal populations 1/n.
  static DetectorEnsemble from_bloch(const std::vector<BlochVector>& directions);

  std::size_t size() const { return states_.size(); }
  Eigen::Index dim() const { return states_.front().dim(); }
  bool is_qubit() const { return dim() == 2; }

  const std::vector<PureState>& states() const { return states_; }
  const std::vector<double>& populations() const { return populations_; }

  /// Cached Bloch vectors; throws DimensionMismatch for non-qubit ensembles.
  const std::vector<BlochVector>& bloch_vectors() const;

 private:
  std::vector<PureState> states_;
  std::vector<double> populations_;
  std::vector<BlochVector> bloch_;
};

/// Two states with Bloch vectors (+-sin theta, 0, cos theta); theta in
/// [0, pi/2]. The overlap of the two states is cos theta.
DetectorEnsemble symmetric_pair(double theta, double zeta1 = 0.5);

/// (0,0,1), (sqrt3/2,0,-1/2), (-sqrt3/2,0,-1/2).
const std::vector<BlochVector>& trine_directions();

/// Three xz-plane Bloch vectors at mutual 120 degrees, n_1 = +z, equal
/// populations.
DetectorEnsemble trine_ensemble();

}  // namespace whichway
