// Neumark dilation of a rank-one qubit POVM into a projective measurement on
// detector (x) ancilla.
#pragma once

#include <vector>

#include "whichway/measurement.hpp"

namespace whichway {

struct Dilation {
  int ancilla_dim = 1;              // k = ceil(N / 2)
  ComplexVector ancilla_state;      // |0> of the ancilla
  std::vector<ComplexMatrix> projectors;  // 2k of them; entries past real_outcomes pad
  std::size_t real_outcomes = 0;    // N
  ComplexMatrix unitary;            // U with U (|psi> (x) |0>) = V |psi>
};

/// Builds the isometry V|psi> = sum_mu <phi_mu|psi> |mu>, A_mu = |phi_mu><phi_mu|,
/// completes it to a unitary U on C^(2k) by Gram-Schmidt over the standard
/// basis in index order, and sets P_mu = U^dag |mu><mu| U. Tensor index of
/// |d> (x) |a> is d * k + a.
Dilation neumark_dilate(const Measurement& m);

/// (1 (x) <phi_0|) P_mu (1 (x) |phi_0>); equals A_mu for the real outcomes.
ComplexMatrix reduced_element(const Dilation& d, std::size_t mu);

/// Tr[P_mu (rho_i (x) rho_aux)] for the real outcomes; beams x outcomes.
Eigen::MatrixXd dilation_probabilities(const Dilation& d, const DetectorEnsemble& e);

/// max over (i, mu) of |Tr[P_mu (rho_i (x) rho_aux)] - Tr[A_mu rho_i]|.
double verify_dilation(const Dilation& d, const Measurement& m, const DetectorEnsemble& e);

struct ProjectorDefects {
  double idempotence = 0.0;
  double orthogonality = 0.0;
  double completeness = 0.0;

  double worst() const;
};

ProjectorDefects projector_defects(const Dilation& d);

}  // namespace whichway
