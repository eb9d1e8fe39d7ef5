#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mpemba/types.hpp"

namespace mpemba::symmetry {

/// U(1) phase action exp(i gamma Q), gamma in [0, 4pi); the generator has
/// half-integer-spaced charges. Eigenbasis and charges are fixed at
/// construction so twirls and mode projections stay cheap.
struct U1Action {
  ComplexMatrix generator;
  ComplexMatrix basis;
  RealVector charges;
};

/// Z_N action of the cycle generator U with U^N = phase * identity.
struct ZNAction {
  int order = 0;
  ComplexMatrix rep;
  ComplexMatrix basis;
  std::vector<int> charges;  // lambda_q = exp(i (phi + 2 pi k_q) / N)
};

/// Time-translation action exp(i H t); modes are Bohr-frequency blocks.
struct TimeTranslationAction {
  ComplexMatrix hamiltonian;
  ComplexMatrix basis;
  RealVector energies;
};

/// SU(2) action generated by a spin triple; only the invariant/non-invariant
/// splitting is exposed. `invariant_basis` spans the commutant in the
/// Hilbert-Schmidt sense (columns are vectorized operators).
struct SU2Action {
  ComplexMatrix sx, sy, sz;
  ComplexMatrix invariant_basis;
  ComplexMatrix complement_basis;
};

using GroupAction = std::variant<U1Action, ZNAction, TimeTranslationAction, SU2Action>;

GroupAction make_u1(const ComplexMatrix& generator);
GroupAction make_zn(int order, const ComplexMatrix& rep);
GroupAction make_time_translation(const ComplexMatrix& hamiltonian);
GroupAction make_su2(const ComplexMatrix& sx, const ComplexMatrix& sy,
                     const ComplexMatrix& sz);

/// Convenience actions on n-qubit registers.
GroupAction u1_total_sz(int qubits);
GroupAction su2_total_spin(int qubits);

Eigen::Index action_dim(const GroupAction& action);

/// Group average. Projects onto the symmetric (invariant) operators;
/// idempotent, trace preserving, positivity preserving.
ComplexMatrix twirl(const ComplexMatrix& rho, const GroupAction& action);

struct ModeDecomposition {
  std::vector<double> labels;
  std::vector<ComplexMatrix> components;

  ComplexMatrix component(double label, double tol = 1e-9) const;
  double completeness_residual(const ComplexMatrix& original) const;
};

/// Split an operator into modes transforming with fixed character under
/// the action (abelian variants); SU(2) splits into invariant part
/// (label 0) and orthogonal complement (label 1).
ModeDecomposition mode_decompose(const ComplexMatrix& x, const GroupAction& action);

struct ModeOccupancy {
  std::vector<double> labels;
  std::vector<double> values;           // ||rho_mu||_1 / ||ref_mu||_1
  std::vector<double> dropped_labels;   // reference norm vanished
};

ModeOccupancy mode_occupancy(const DensityMatrix& rho, const GroupAction& action,
                             const DensityMatrix& reference);

/// Max over sampled group elements of the operator norm of
/// channel o U_g - U_g o channel. 16 deterministic samples for the
/// continuous abelian actions, the whole group for Z_N, 32 quasi-random
/// rotations for SU(2).
double covariance_check(const ComplexMatrix& channel, const GroupAction& action);

/// Superoperators of sampled group elements (the same sampling that
/// covariance_check uses).
std::vector<ComplexMatrix> sampled_group_superops(const GroupAction& action);

struct SectorSpectrum {
  std::vector<double> labels;
  std::vector<ComplexVector> eigenvalues;  // per sector
  std::vector<ComplexMatrix> right;        // vectorized modes, full-space
  std::vector<ComplexMatrix> left;

  /// All eigenvalues with their sector labels, sorted like eig_general.
  std::vector<std::pair<double, Complex>> flattened() const;
};

/// Restrict a covariant channel to each mode subspace and diagonalize the
/// blocks independently. Refuses when covariance_check exceeds 1e-8.
SectorSpectrum sector_spectrum(const ComplexMatrix& channel, const GroupAction& action);

/// S(rho || twirl(rho)); the equivalent entropy-difference form
/// S(twirl(rho)) - S(rho) is computed as a cross-check.
double relative_entropy_asymmetry(const DensityMatrix& rho, const GroupAction& action);

}  // namespace mpemba::symmetry
