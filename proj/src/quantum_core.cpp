#include "whichway/quantum_core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace whichway {

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double hermitian_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
}

bool is_psd(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  return hermitian_eigenvalues(m).minCoeff() >= -tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

const std::array<Eigen::Matrix2cd, 3>& pauli() {
  static const std::array<Eigen::Matrix2cd, 3> matrices = [] {
    const Complex i{0.0, 1.0};
    std::array<Eigen::Matrix2cd, 3> s;
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -i, i, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return matrices;
}

Eigen::Matrix2cd pauli_dot(const BlochVector& v) {
  const auto& s = pauli();
  return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("pure state: empty amplitude vector");
  if (!amplitudes_.allFinite()) throw ValidationError("pure state: non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kStateTolerance) {
    std::ostringstream msg;
    msg << "pure state: norm " << norm << " differs from 1";
    throw ValidationError(msg.str());
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("pure state: cannot normalize a zero or non-finite vector");
  }
  return PureState(amplitudes / norm);
}

ComplexMatrix PureState::density() const { return amplitudes_ * amplitudes_.adjoint(); }

PureState bloch_to_state(const BlochVector& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kStateTolerance) {
    throw ValidationError("bloch_to_state: Bloch vector must have unit length");
  }
  const Complex xy{v.x(), v.y()};
  ComplexVector amps(2);
  // Pick the eigenvector expression with the larger denominator.
  if (v.z() >= 0.0) {
    const double denom = std::sqrt(2.0 * (1.0 + v.z()));
    amps << (1.0 + v.z()) / denom, xy / denom;
  } else {
    const double denom = std::sqrt(2.0 * (1.0 - v.z()));
    amps << std::conj(xy) / denom, (1.0 - v.z()) / denom;
    if (amps(0) != 0.0) amps *= std::conj(amps(0)) / std::abs(amps(0));
  }
  return PureState::normalized(std::move(amps));
}

BlochVector state_to_bloch(const PureState& s) {
  if (s.dim() != 2) throw DimensionMismatch("state_to_bloch: qubit state required");
  const Complex a0 = s.amplitudes()(0);
  const Complex a1 = s.amplitudes()(1);
  const Complex c = std::conj(a0) * a1;
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(a0) - std::norm(a1)};
}

Complex overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("overlap: states of different dimension");
  return a.amplitudes().dot(b.amplitudes());
}

DetectorEnsemble::DetectorEnsemble(std::vector<PureState> states, std::vector<double> populations)
    : states_(std::move(states)), populations_(std::move(populations)) {
  if (states_.size() < 2) throw ValidationError("ensemble: at least two detector states required");
  if (populations_.size() != states_.size()) {
    throw ValidationError("ensemble: one population per detector state required");
  }
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw DimensionMismatch("ensemble: detector states of different dimension");
    }
  }
  for (double z : populations_) {
    if (!std::isfinite(z) || z < 0.0) throw ValidationError("ensemble: populations must be >= 0");
  }
  const double total = std::accumulate(populations_.begin(), populations_.end(), 0.0);
  if (std::abs(total - 1.0) > kStateTolerance) {
    std::ostringstream msg;
    msg << "ensemble: populations sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
  if (is_qubit()) {
    bloch_.reserve(states_.size());
    for (const auto& s : states_) bloch_.push_back(state_to_bloch(s));
  }
}

DetectorEnsemble DetectorEnsemble::from_bloch(const std::vector<BlochVector>& directions,
                                              std::vector<double> populations) {
  std::vector<PureState> states;
  states.reserve(directions.size());
  for (const auto& d : directions) states.push_back(bloch_to_state(d));
  DetectorEnsemble e(std::move(states), std::move(populations));
  e.bloch_ = directions;
  return e;
}

DetectorEnsemble DetectorEnsemble::from_bloch(const std::vector<BlochVector>& directions) {
  const double share = directions.empty() ? 0.0 : 1.0 / static_cast<double>(directions.size());
  return from_bloch(directions, std::vector<double>(directions.size(), share));
}

const std::vector<BlochVector>& DetectorEnsemble::bloch_vectors() const {
  if (!is_qubit()) throw DimensionMismatch("ensemble: Bloch vectors exist only for qubits");
  return bloch_;
}

DetectorEnsemble symmetric_pair(double theta, double zeta1) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw ValidationError("symmetric_pair: theta must lie in [0, pi/2]");
  }
  if (!(zeta1 >= 0.0 && zeta1 <= 1.0)) {
    throw ValidationError("symmetric_pair: population must lie in [0, 1]");
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return DetectorEnsemble::from_bloch({BlochVector(s, 0.0, c), BlochVector(-s, 0.0, c)},
                                      {zeta1, 1.0 - zeta1});
}

const std::vector<BlochVector>& trine_directions() {
  static const std::vector<BlochVector> directions = [] {
    const double h = std::sqrt(3.0) / 2.0;
    return std::vector<BlochVector>{BlochVector(0.0, 0.0, 1.0), BlochVector(h, 0.0, -0.5),
                                    BlochVector(-h, 0.0, -0.5)};
  }();
  return directions;
}

DetectorEnsemble trine_ensemble() { return DetectorEnsemble::from_bloch(trine_directions()); }

}  // namespace whichway
