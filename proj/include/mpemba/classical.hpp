#pragma once

#include <utility>
#include <vector>

#include "mpemba/types.hpp"

namespace mpemba::classical {

/// Entry (i, i') of `matrix` is the jump rate i' -> i; columns sum to zero.
struct ClassicalGenerator {
  RealMatrix matrix;
  ProbabilityVector stationary;
  bool detailed_balance = false;
  GeneratorSpectrum spectrum;  // computed at build time, shared read-only

  Eigen::Index dim() const { return matrix.rows(); }
};

struct IsingChainParams {
  double coupling = -0.4;   // J
  double field = 0.2;       // h
  int spins = 7;            // N_s
  double beta_bath = 1.0;   // beta_e
  double beta_init = 0.5;   // beta_i
};

enum class RateConvention { ArrheniusSymmetric, HeatBath };

/// E = -J sum s_n s_{n+1} - h sum s_n with one fixed virtual boundary spin
/// s_{N_s+1} = +1 closing the interaction sum.
double ising_energy(const std::vector<int>& config, const IsingChainParams& params);

/// Energies of all 2^{N_s} microstates; bit n-1 of the index encodes spin
/// s_n (0 -> +1, 1 -> -1).
std::vector<double> ising_energies(const IsingChainParams& params);

/// Pairs of microstates differing by a single spin flip.
std::vector<std::pair<int, int>> single_spin_flip_adjacency(int spins);

/// Rates satisfy W_{ii'}/W_{i'i} = exp(-beta (E_i - E_{i'})) on the given
/// adjacency; stationary state is the Gibbs vector. Throws NumericalError
/// on a disconnected adjacency (non-unique stationary state).
ClassicalGenerator build_detailed_balance_generator(
    const std::vector<double>& energies, double beta,
    const std::vector<std::pair<int, int>>& adjacency,
    RateConvention convention = RateConvention::ArrheniusSymmetric);

/// Four-site ring with clockwise rate 1+eps and counterclockwise 1-eps.
ClassicalGenerator build_z4_generator(double eps);

/// p(t) = exp(t L) p0 via the spectral expansion, falling back to
/// scaling-and-squaring when the eigenbasis is unreliable.
ProbabilityVector evolve_classical(const ClassicalGenerator& gen,
                                   const ProbabilityVector& p0, double t);

/// Expansion coefficients a_k with sum_k a_k r_k = p. For detailed-balance
/// generators these are the pi-weighted inner products <p, r_k>_pi.
ComplexVector spectral_overlaps(const ClassicalGenerator& gen,
                                const ProbabilityVector& p);

/// sum p_i ln(p_i / q_i); +inf when support(p) is not inside support(q).
double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q);

/// (alpha-1)^{-1} ln sum p_i^alpha q_i^{1-alpha}, alpha in (0,1) or (1,2].
double renyi_divergence(const ProbabilityVector& p, const ProbabilityVector& q,
                        double alpha);

/// Late-time KL ~ prefactor * exp(rate * t) from the slowest modes with
/// nonvanishing overlap (all modes within 1e-9 of the leading real part).
std::pair<double, double> asymptotic_kl_predictor(const ClassicalGenerator& gen,
                                                  const ProbabilityVector& p0);

/// Uniform average of p over a permutation group; throws NumericalError
/// when the set is not closed under composition or lacks the identity.
ProbabilityVector twirl_discrete_classical(
    const ProbabilityVector& p, const std::vector<std::vector<int>>& group);

/// D(p || twirl(p)).
double classical_asymmetry(const ProbabilityVector& p,
                           const std::vector<std::vector<int>>& group);

/// Cyclic rotation group {identity, shift, ..., shift^{L-1}} on L sites.
std::vector<std::vector<int>> cyclic_group(int length);

/// Gibbs vector exp(-beta E)/Z.
ProbabilityVector gibbs_vector(const std::vector<double>& energies, double beta);

}  // namespace mpemba::classical
