#include "whichway/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace whichway {

namespace {

constexpr double kDependenceFloor = 1e-8;

// Gram-Schmidt with one reorthogonalization pass against `basis`.
ComplexVector orthogonalized(ComplexVector v, const std::vector<ComplexVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b.dot(v) * b;
  }
  return v;
}

}  // namespace

Dilation neumark_dilate(const Measurement& m) {
  const auto report = validate(m);
  if (!report.valid) throw InvalidMeasurement("neumark_dilate: invalid measurement");
  const auto elements = m.as_rank_one();
  if (!elements) throw InvalidMeasurement("neumark_dilate: rank-one qubit measurement required");

  const std::size_t n = elements->size();
  const int k = static_cast<int>((n + 1) / 2);
  const Eigen::Index dim = 2 * k;

  // Row mu of V is <phi_mu| with |phi_mu> = sqrt(2 alpha) |m_mu>.
  ComplexMatrix v = ComplexMatrix::Zero(dim, 2);
  for (std::size_t mu = 0; mu < n; ++mu) {
    const auto& el = (*elements)[mu];
    const ComplexVector phi = std::sqrt(2.0 * el.weight) * bloch_to_state(el.direction).amplitudes();
    v.row(static_cast<Eigen::Index>(mu)) = phi.adjoint();
  }

  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexVector> basis;
  for (Eigen::Index d = 0; d < 2; ++d) {
    ComplexVector col = orthogonalized(v.col(d), basis);
    col /= col.norm();
    u.col(d * k) = col;
    basis.push_back(col);
  }
  Eigen::Index next_slot = 0;
  auto free_slot = [&]() {
    while (next_slot % k == 0 && next_slot / k < 2) ++next_slot;
    return next_slot++;
  };
  for (Eigen::Index s = 0; s < dim && static_cast<Eigen::Index>(basis.size()) < dim; ++s) {
    ComplexVector col = orthogonalized(ComplexVector::Unit(dim, s), basis);
    const double norm = col.norm();
    if (norm < kDependenceFloor) continue;
    col /= norm;
    u.col(free_slot()) = col;
    basis.push_back(col);
  }

  Dilation out;
  out.ancilla_dim = k;
  out.ancilla_state = ComplexVector::Unit(k, 0);
  out.real_outcomes = n;
  out.unitary = u;
  for (Eigen::Index mu = 0; mu < dim; ++mu) {
    const ComplexMatrix row = u.row(mu);
    out.projectors.push_back(row.adjoint() * row);
  }
  return out;
}

ComplexMatrix reduced_element(const Dilation& d, std::size_t mu) {
  if (mu >= d.projectors.size()) throw std::out_of_range("reduced_element: outcome out of range");
  const ComplexMatrix embed = kron(ComplexMatrix::Identity(2, 2), d.ancilla_state);
  return embed.adjoint() * d.projectors[mu] * embed;
}

Eigen::MatrixXd dilation_probabilities(const Dilation& d, const DetectorEnsemble& e) {
  if (e.dim() != 2) throw DimensionMismatch("dilation_probabilities: qubit ensemble required");
  const ComplexMatrix rho_aux = d.ancilla_state * d.ancilla_state.adjoint();
  Eigen::MatrixXd p(static_cast<Eigen::Index>(e.size()), static_cast<Eigen::Index>(d.real_outcomes));
  for (std::size_t i = 0; i < e.size(); ++i) {
    const ComplexMatrix joint = kron(e.states()[i].density(), rho_aux);
    for (std::size_t mu = 0; mu < d.real_outcomes; ++mu) {
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mu)) =
          std::max(0.0, (d.projectors[mu] * joint).trace().real());
    }
  }
  return p;
}

double verify_dilation(const Dilation& d, const Measurement& m, const DetectorEnsemble& e) {
  if (m.size() != d.real_outcomes) {
    throw DimensionMismatch("verify_dilation: outcome count differs from the dilation");
  }
  if (m.dim() != 2 || e.dim() != 2) throw DimensionMismatch("verify_dilation: qubit operators required");
  const Eigen::Index dim = 2 * d.ancilla_dim;
  for (const auto& p : d.projectors) {
    if (p.rows() != dim || p.cols() != dim) throw DimensionMismatch("verify_dilation: projector size");
  }
  return (dilation_probabilities(d, e) - outcome_probabilities_trace(e, m)).cwiseAbs().maxCoeff();
}

double ProjectorDefects::worst() const { return std::max({idempotence, orthogonality, completeness}); }

ProjectorDefects projector_defects(const Dilation& d) {
  ProjectorDefects out;
  const Eigen::Index dim = 2 * d.ancilla_dim;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < d.projectors.size(); ++a) {
    const auto& p = d.projectors[a];
    out.idempotence = std::max(out.idempotence, (p * p - p).cwiseAbs().maxCoeff());
    for (std::size_t b = a + 1; b < d.projectors.size(); ++b) {
      out.orthogonality = std::max(out.orthogonality, (p * d.projectors[b]).cwiseAbs().maxCoeff());
    }
    total += p;
  }
  out.completeness = (total - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace whichway
