#include "whichway/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace whichway {

namespace {

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

// Phase convention shared with bloch_to_state: first nonzero amplitude real
// and positive.
void fix_phase(ComplexVector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-14) {
      v *= std::conj(v(k)) / std::abs(v(k));
      return;
    }
  }
}

bool lexicographically_greater(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (std::abs(a(k).real() - b(k).real()) > 1e-12) return a(k).real() > b(k).real();
    if (std::abs(a(k).imag() - b(k).imag()) > 1e-12) return a(k).imag() > b(k).imag();
  }
  return false;
}

struct SpectralPiece {
  double eigenvalue;
  ComplexVector vector;
};

// Rank-one pieces of a Hermitian PSD operator with deterministic handling of
// degenerate eigenspaces.
std::vector<SpectralPiece> spectral_pieces(const ComplexMatrix& a) {
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const ComplexMatrix& vectors = solver.eigenvectors();
  const Eigen::Index d = h.rows();

  std::vector<SpectralPiece> pieces;
  Eigen::Index start = d - 1;
  while (start >= 0) {
    // Group [stop, start] of (numerically) equal eigenvalues, descending.
    Eigen::Index stop = start;
    while (stop > 0 && std::abs(values(stop - 1) - values(start)) <= kValidityTolerance) --stop;
    const Eigen::Index multiplicity = start - stop + 1;
    const double lambda = values.segment(stop, multiplicity).mean();

    if (lambda >= kEigenvalueFloor) {
      std::vector<ComplexVector> basis;
      if (multiplicity == 1) {
        basis.push_back(vectors.col(start));
      } else {
        const ComplexMatrix v = vectors.middleCols(stop, multiplicity);
        const ComplexMatrix projector = v * v.adjoint();
        for (Eigen::Index k = 0; k < d && static_cast<Eigen::Index>(basis.size()) < multiplicity;
             ++k) {
          ComplexVector candidate = projector.col(k);
          for (const auto& b : basis) candidate -= b.dot(candidate) * b;
          const double norm = candidate.norm();
          if (norm > 1e-8) basis.push_back(candidate / norm);
        }
      }
      for (auto& b : basis) fix_phase(b);
      std::sort(basis.begin(), basis.end(), lexicographically_greater);
      for (auto& b : basis) pieces.push_back({lambda, std::move(b)});
    }
    start = stop - 1;
  }
  return pieces;
}

}  // namespace

ComplexMatrix to_matrix(const RankOneElement& e) {
  return e.weight * (Eigen::Matrix2cd::Identity() + pauli_dot(e.direction));
}

Measurement Measurement::from_matrices(std::vector<ComplexMatrix> elements) {
  if (elements.empty()) throw ValidationError("measurement: no elements");
  Measurement m;
  m.dim_ = elements.front().rows();
  for (const auto& a : elements) {
    if (a.rows() != m.dim_ || a.cols() != m.dim_) {
      throw DimensionMismatch("measurement: elements must be square and of equal dimension");
    }
    if (!a.allFinite()) throw ValidationError("measurement: non-finite element entry");
  }
  m.elements_ = std::move(elements);
  return m;
}

Measurement Measurement::from_rank_one(std::vector<RankOneElement> elements) {
  if (elements.empty()) throw ValidationError("measurement: no elements");
  std::vector<ComplexMatrix> matrices;
  matrices.reserve(elements.size());
  for (std::size_t mu = 0; mu < elements.size(); ++mu) {
    const auto& e = elements[mu];
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      std::ostringstream msg;
      msg << "measurement: element " << mu << " has non-positive weight " << e.weight;
      throw ValidationError(msg.str());
    }
    if (!e.direction.allFinite() || std::abs(e.direction.norm() - 1.0) > kStateTolerance) {
      std::ostringstream msg;
      msg << "measurement: element " << mu << " direction is not a unit vector";
      throw ValidationError(msg.str());
    }
    matrices.push_back(to_matrix(e));
  }
  Measurement m;
  m.dim_ = 2;
  m.elements_ = std::move(matrices);
  m.rank_one_ = std::move(elements);
  return m;
}

const std::vector<RankOneElement>& Measurement::rank_one() const {
  if (!rank_one_) throw std::logic_error("measurement has no rank-one form");
  return *rank_one_;
}

std::optional<std::vector<RankOneElement>> Measurement::as_rank_one(double tol) const {
  if (rank_one_) return rank_one_;
  if (dim_ != 2) return std::nullopt;
  std::vector<RankOneElement> out;
  out.reserve(elements_.size());
  const auto& s = pauli();
  for (const auto& a : elements_) {
    if (!is_hermitian(a, tol)) return std::nullopt;
    const double a0 = 0.5 * a.trace().real();
    const BlochVector v(0.5 * (a * s[0]).trace().real(), 0.5 * (a * s[1]).trace().real(),
                        0.5 * (a * s[2]).trace().real());
    const double r = v.norm();
    if (!(a0 > tol) || std::abs(a0 - r) > tol) return std::nullopt;
    out.push_back({a0, v / r});
  }
  return out;
}

ValidityReport validate(const Measurement& m) {
  ValidityReport report;
  ComplexMatrix sum = ComplexMatrix::Zero(m.dim(), m.dim());
  for (const auto& a : m.elements()) {
    const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
    const double lowest = hermitian_eigenvalues(a).minCoeff();
    report.psd_defect = std::max({report.psd_defect, asym, -lowest});
    sum += a;
  }
  report.completeness_defect = operator_norm(sum - ComplexMatrix::Identity(m.dim(), m.dim()));
  report.valid = report.psd_defect <= kValidityTolerance &&
                 report.completeness_defect <= kValidityTolerance;
  if (m.has_rank_one_form()) {
    double total = 0.0;
    BlochVector balance = BlochVector::Zero();
    for (const auto& e : m.rank_one()) {
      total += e.weight;
      balance += e.weight * e.direction;
    }
    report.weight_sum_defect = std::abs(total - 1.0);
    report.balance_defect = balance.norm();
    report.valid = report.valid && *report.weight_sum_defect <= kValidityTolerance &&
                   *report.balance_defect <= kValidityTolerance;
  }
  report.is_pvm = report.valid && is_pvm(m);
  return report;
}

bool is_pvm(const Measurement& m) {
  ComplexMatrix sum = ComplexMatrix::Zero(m.dim(), m.dim());
  for (const auto& a : m.elements()) {
    if (!is_psd(a, kValidityTolerance)) throw InvalidMeasurement("is_pvm: element is not PSD");
    sum += a;
  }
  if (operator_norm(sum - ComplexMatrix::Identity(m.dim(), m.dim())) > kValidityTolerance) {
    throw InvalidMeasurement("is_pvm: elements do not sum to the identity");
  }
  const auto& el = m.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    if ((el[i] * el[i] - el[i]).cwiseAbs().maxCoeff() > kValidityTolerance) return false;
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      if ((el[i] * el[j]).cwiseAbs().maxCoeff() > kValidityTolerance) return false;
    }
  }
  return true;
}

std::vector<double> PosteriorTable::column(std::size_t mu) const {
  std::vector<double> out(beams());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mu));
  }
  return out;
}

Eigen::MatrixXd outcome_probabilities_trace(const DetectorEnsemble& e, const Measurement& m) {
  if (e.dim() != m.dim()) throw DimensionMismatch("outcome_probabilities: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(e.size());
  const auto N = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd P(n, N);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ComplexVector& chi = e.states()[static_cast<std::size_t>(i)].amplitudes();
    for (Eigen::Index mu = 0; mu < N; ++mu) {
      const double p = chi.dot(m[static_cast<std::size_t>(mu)] * chi).real();
      P(i, mu) = std::max(p, 0.0);
    }
  }
  return P;
}

Eigen::MatrixXd outcome_probabilities_bloch(const DetectorEnsemble& e, const Measurement& m) {
  if (e.dim() != m.dim()) throw DimensionMismatch("outcome_probabilities: dimension mismatch");
  const auto& n_hat = e.bloch_vectors();
  const auto& elements = m.rank_one();
  Eigen::MatrixXd P(static_cast<Eigen::Index>(n_hat.size()),
                    static_cast<Eigen::Index>(elements.size()));
  for (std::size_t i = 0; i < n_hat.size(); ++i) {
    for (std::size_t mu = 0; mu < elements.size(); ++mu) {
      const double p = elements[mu].weight * (1.0 + elements[mu].direction.dot(n_hat[i]));
      P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mu)) = std::max(p, 0.0);
    }
  }
  return P;
}

Eigen::MatrixXd outcome_probabilities(const DetectorEnsemble& e, const Measurement& m) {
  if (m.has_rank_one_form() && e.is_qubit()) return outcome_probabilities_bloch(e, m);
  return outcome_probabilities_trace(e, m);
}

PosteriorTable posteriors_from_probabilities(std::span<const double> populations,
                                             const Eigen::MatrixXd& P) {
  if (static_cast<Eigen::Index>(populations.size()) != P.rows()) {
    throw DimensionMismatch("posteriors: one population per row required");
  }
  PosteriorTable t;
  t.P = P;
  const Eigen::Map<const Eigen::VectorXd> zeta(populations.data(), P.rows());
  const Eigen::MatrixXd joint = zeta.asDiagonal() * P;
  t.q = joint.colwise().sum().transpose();
  t.Q = Eigen::MatrixXd::Zero(P.rows(), P.cols());
  t.support.assign(static_cast<std::size_t>(P.cols()), false);
  for (Eigen::Index mu = 0; mu < P.cols(); ++mu) {
    if (t.q(mu) > 0.0) {
      t.support[static_cast<std::size_t>(mu)] = true;
      t.Q.col(mu) = joint.col(mu) / t.q(mu);
    }
  }
  return t;
}

PosteriorTable posteriors(const DetectorEnsemble& e, const Measurement& m) {
  return posteriors_from_probabilities(e.populations(), outcome_probabilities(e, m));
}

Measurement rank_one_refine(const Measurement& m) {
  if (!validate(m).valid) throw InvalidMeasurement("rank_one_refine: input is not a valid POVM");
  std::vector<ComplexMatrix> matrices;
  std::vector<RankOneElement> bloch;
  for (const auto& a : m.elements()) {
    for (auto& piece : spectral_pieces(a)) {
      matrices.push_back(piece.eigenvalue * piece.vector * piece.vector.adjoint());
      if (m.dim() == 2) {
        bloch.push_back({0.5 * piece.eigenvalue, state_to_bloch(PureState::normalized(piece.vector))});
      }
    }
  }
  if (m.dim() == 2) return Measurement::from_rank_one(std::move(bloch));
  return Measurement::from_matrices(std::move(matrices));
}

std::vector<RankOneElement> completion_remainder(std::span<const RankOneElement> parts) {
  double total = 0.0;
  BlochVector balance = BlochVector::Zero();
  for (const auto& p : parts) {
    total += p.weight;
    balance += p.weight * p.direction;
  }
  // 1 - sum(parts) = a * 1 + w . sigma, eigenvalues a +- |w|.
  const double a = 1.0 - total;
  const BlochVector w = -balance;
  const double r = w.norm();
  if (a - r < -kValidityTolerance) {
    std::ostringstream msg;
    msg << "completion: remainder has negative eigenvalue " << (a - r);
    throw InfeasibleCompletion(msg.str());
  }
  std::vector<RankOneElement> out;
  BlochVector axis = BlochVector::UnitZ();
  double upper = a;
  double lower = a;
  if (r > 1e-14) {
    axis = w / r;
    upper = a + r;
    lower = a - r;
  }
  if (upper >= kEigenvalueFloor) out.push_back({0.5 * upper, axis});
  if (lower >= kEigenvalueFloor) out.push_back({0.5 * lower, -axis});
  return out;
}

Measurement complete_from_partial(std::span<const RankOneElement> parts) {
  std::vector<RankOneElement> all(parts.begin(), parts.end());
  for (const auto& extra : completion_remainder(parts)) all.push_back(extra);
  return Measurement::from_rank_one(std::move(all));
}

}  // namespace whichway
