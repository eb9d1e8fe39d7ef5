#pragma once

#include <cstdint>
#include <vector>

#include "mpemba/classical.hpp"
#include "mpemba/lindblad.hpp"
#include "mpemba/types.hpp"

namespace mpemba::optimizer {

struct MetropolisConfig {
  int slow_mode_count = 1;  // K, must satisfy 1 <= K < dimension - 1
  long iterations = 20000;
  double initial_inverse_temperature = 50.0;  // acceptance exponent T_eff
  // Linear T_eff change per accepted move; negative selects the default
  // slope reaching 100x the initial value after `iterations` acceptances.
  double schedule = -1.0;
  // Paper-style direction: loosen acceptance over time instead.
  bool decreasing_schedule = false;
  bool polish = true;  // greedy pair-swap descent after annealing
  std::uint64_t seed = 1;
};

/// C = sum over the K slowest decaying modes of |<p, r_k>_pi|.
double overlap_cost_classical(const ProbabilityVector& p,
                              const classical::ClassicalGenerator& gen, int k);

struct PermutationResult {
  ProbabilityVector p_opt;
  std::vector<int> permutation;  // p_opt[perm[i]] = p0[i]
  std::vector<double> cost_history;
};

/// Anneal over entry permutations of p0, moving 4 randomly selected
/// entries at a time; worse moves accepted with exp(-T_eff dC).
PermutationResult metropolis_permute(const classical::ClassicalGenerator& gen,
                                     const ProbabilityVector& p0,
                                     const MetropolisConfig& cfg);

/// Sum over the K slowest decaying modes of |Tr[l_k^dag rho]|.
double overlap_cost_quantum(const DensityMatrix& rho,
                            const lindblad::SuperopSpectrum& spec, int k);

struct RotationResult {
  DensityMatrix rho_opt;
  ComplexMatrix rotation;  // accumulated unitary, rho_opt = R rho0 R^dag
  std::vector<double> cost_history;
};

/// Anneal over unitary rotations built from random two-level Givens moves;
/// the state spectrum is preserved exactly.
RotationResult metropolis_rotate(const lindblad::SuperopSpectrum& spec,
                                 const DensityMatrix& rho0,
                                 const MetropolisConfig& cfg);

}  // namespace mpemba::optimizer
