#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mpemba/rng.hpp"
#include "mpemba/types.hpp"

namespace mpemba::circuits {

struct StateVector {
  ComplexVector amps;
  int qubits = 0;
};

StateVector make_statevector(ComplexVector amps, int qubits);
StateVector zero_state(int qubits);

struct GateParams {
  double j = 0.0;
  double jz = 0.0;
  double h_n = 0.0;
  double h_np = 0.0;
  double phi_n = 0.0;
};

/// exp(-i h_xxz) exp(-i h_n s^z x 1) exp(-i h'_n 1 x s^z); conserves the
/// two-qubit magnetization for any parameters.
ComplexMatrix u1_gate(const GateParams& params);

/// Isotropic exchange gate (J = J_z, no local phases); commutes with all
/// three total-spin components.
ComplexMatrix su2_gate(double j);

enum class CircuitSymmetry { U1, SU2 };

struct CircuitSpec {
  int system_qubits = 4;
  int env_qubits = 2;
  CircuitSymmetry symmetry = CircuitSymmetry::U1;
  double exchange_min = -0.6283185307179586;  // J, J_z range (pi/5)
  double exchange_max = 0.6283185307179586;
  double phase_min = 0.0;                     // h_n, h'_n, phi_n range
  double phase_max = 6.283185307179586;
  std::uint64_t seed = 1;

  int total_qubits() const { return system_qubits + env_qubits; }
};

void validate_spec(const CircuitSpec& spec);

ComplexMatrix sample_gate(const CircuitSpec& spec, Rng& rng);

/// In-place two-qubit gate on (qa, qb); qubit 0 is the most significant bit.
void apply_two_qubit_gate(StateVector& psi, const ComplexMatrix& gate, int qa, int qb);

/// One Floquet step: freshly sampled gates on odd bonds (1,2),(3,4),...
/// then even bonds (2,3),...,(N,1) in one-based labels, periodic wrap.
void brickwork_step(StateVector& psi, const CircuitSpec& spec, Rng& rng);

/// The same step materialized as gate lists, for replaying across ensemble
/// branches of a mixed initial state.
struct BrickworkLayer {
  std::vector<ComplexMatrix> gates;  // one per bond, layer A then layer B
};
BrickworkLayer sample_brickwork_layer(const CircuitSpec& spec, Rng& rng);
void apply_brickwork_layer(StateVector& psi, const BrickworkLayer& layer);

/// Tensor power of exp(-i theta s^y)|0>.
StateVector tilted_product_state(double theta, int n);

/// Per-block exp(-i theta prod_j s^y_j) on |0...0>; a ragged last block
/// uses the remaining qubits' y-string.
StateVector block_tilted_state(double theta, int block, int n);

/// cos(theta/2) |singlets> + sin(theta/2) |0...0>, n even.
StateVector su2_tilted_state(double theta, int n);

/// Environment of n/2 singlet pairs (n even).
StateVector singlet_state(int n);

/// Reduced state of the leading `system_qubits` qubits.
DensityMatrix reduced_system_state(const StateVector& psi, int system_qubits);

/// One-step channel rho -> Tr_e[U (rho x 1/2^{N_e}) U^dag] as a matrix on
/// column-stacked system operators.
ComplexMatrix markov_channel(const CircuitSpec& spec, Rng& rng);

/// Repeated brickwork evolution without environment resets; returns the
/// reduced system state after each step (index 0 is the initial state).
std::vector<DensityMatrix> nonmarkov_evolve(const CircuitSpec& spec,
                                            const StateVector& system,
                                            const StateVector& environment,
                                            int steps, Rng& rng);
std::vector<DensityMatrix> nonmarkov_evolve(const CircuitSpec& spec,
                                            const DensityMatrix& system,
                                            const StateVector& environment,
                                            int steps, Rng& rng);

struct EthParams {
  double coupling_zz = 1.0;   // J
  double field_z = 0.3;       // h_z
  double field_x = 1.1;       // h_x
  double edge_first = 0.25;   // h_1
  double edge_last = -0.25;   // h_N
  double system_coupling = 0.15;  // kappa
  double system_field = 1.525;    // h_0
  int env_spins = 11;             // N
};

/// Dense H_se = h_0 s_0^z + kappa s_0^x s_1^x + H_e on env_spins + 1 qubits.
ComplexMatrix eth_model(const EthParams& params);

/// Dense environment Hamiltonian on env_spins qubits (real symmetric).
RealMatrix eth_env_hamiltonian(const EthParams& params);

/// Matrix-free action of eth_model on a joint statevector.
void eth_apply(const EthParams& params, const ComplexVector& in, ComplexVector& out);

struct EnvSpectrum {
  RealVector energies;
  RealMatrix vectors;
  double mean = 0.0;
  double variance = 1.0;  // Gaussian density-of-states fit
};

EnvSpectrum diagonalize_env(const RealMatrix& h_env);

/// Microcanonical inverse temperature of the Gaussian fit at energy e.
double microcanonical_beta(const EnvSpectrum& env, double e);

/// Eigenstate whose energy matches the target inverse temperature
/// (nearest-energy selection).
Eigen::Index select_by_beta(const EnvSpectrum& env, double beta);

/// Nearest eigenstate to a target energy; throws past `tol` and reports
/// the closest candidate.
Eigen::Index select_by_energy(const EnvSpectrum& env, double energy, double tol);

using Matvec = std::function<void(const ComplexVector&, ComplexVector&)>;

/// Lanczos propagation psi -> exp(-i t H) psi with adaptive subspace size
/// and step halving on breakdown; per-step norm-error target 1e-9.
ComplexVector krylov_propagate(const Matvec& apply, const ComplexVector& psi0,
                               double t, int max_subspace = 40);

/// Reduced qubit-0 states of exp(-i t H_se) psi0 at the requested times.
std::vector<DensityMatrix> eth_evolve(const EthParams& params, const StateVector& psi0,
                                      const std::vector<double>& times);

}  // namespace mpemba::circuits
