#pragma once

#include <utility>
#include <vector>

#include "mpemba/types.hpp"

namespace mpemba::lindblad {

struct LindbladModel {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> jumps;

  Eigen::Index dim() const { return hamiltonian.rows(); }
};

/// Spectrum of a vectorized Lindbladian together with its steady state.
struct SuperopSpectrum {
  GeneratorSpectrum spec;   // modes are column-stacked d x d operators
  DensityMatrix steady;
  Eigen::Index dim = 0;

  ComplexMatrix right_mode(Eigen::Index k) const;
  ComplexMatrix left_mode(Eigen::Index k) const;
};

/// Vectorized -i[H, .] + sum_l (L . L^dag - 1/2 {L^dag L, .}).
ComplexMatrix build_lindbladian(const LindbladModel& model);

enum class BathStatistics { Bosonic, Fermionic };

/// Jump operators between every eigenpair of h_s weighted by the thermal
/// occupation at inverse temperature beta; the fixed point is the Gibbs
/// state and the dissipator commutes with the Hamiltonian adjoint action.
/// Strictly degenerate levels receive the symmetric rate 1/2 per direction.
LindbladModel davies_generator(const ComplexMatrix& h_s, double beta,
                               BathStatistics stats = BathStatistics::Bosonic);

/// Four-site ring with coherent hopping J and chirally biased incoherent
/// hopping; steady state I/4.
LindbladModel z4_quantum_model(double hopping, double eps);

/// Collective-spin model on the symmetric sector: H = Omega Sx - Delta Sz
/// + (V/n_s) Sz^2 with jump sqrt(kappa) S-.
LindbladModel all_to_all_model(int n_s, double omega, double delta, double v,
                               double kappa);

/// Diagonalize a vectorized generator; `ergodic` asserts a unique null mode.
SuperopSpectrum diagonalize_superop(const ComplexMatrix& superop,
                                    bool ergodic = true);

/// rho(t) = sum_k a_k e^{lambda_k t} r_k; falls back to a dense exponential
/// when the eigenbasis reconstruction is unreliable.
DensityMatrix evolve_density(const SuperopSpectrum& spec,
                             const DensityMatrix& rho0, double t);

/// Late-time S(rho(t)||reference) ~ prefactor * exp(rate * t); all modes
/// within 1e-9 of the leading surviving real part contribute.
std::pair<double, double> asymptotic_qre_predictor(const SuperopSpectrum& spec,
                                                   const DensityMatrix& rho0,
                                                   const DensityMatrix& reference);

/// Overlap coefficients a_k = Tr[l_k^dag rho].
ComplexVector superop_overlaps(const SuperopSpectrum& spec,
                               const DensityMatrix& rho);

/// Gibbs state exp(-beta h)/Z.
DensityMatrix gibbs_state(const ComplexMatrix& h, double beta);

}  // namespace mpemba::lindblad
