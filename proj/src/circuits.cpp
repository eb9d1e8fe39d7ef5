#include "mpemba/circuits.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "mpemba/numkit.hpp"
#include "mpemba/spins.hpp"

namespace mpemba::circuits {

namespace {

constexpr int kStatevectorCap = 22;

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double prefactor_imag) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases[i] = std::exp(Complex(0, prefactor_imag * es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

StateVector make_statevector(ComplexVector amps, int qubits) {
  if (amps.size() != (Eigen::Index(1) << qubits))
    throw DimensionError("amplitude count does not match qubit count");
  if (std::abs(amps.norm() - 1.0) > 1e-10)
    throw NumericalError("statevector not normalized");
  return StateVector{std::move(amps), qubits};
}

StateVector zero_state(int qubits) {
  ComplexVector amps = ComplexVector::Zero(Eigen::Index(1) << qubits);
  amps[0] = 1.0;
  return StateVector{std::move(amps), qubits};
}

ComplexMatrix u1_gate(const GateParams& params) {
  const ComplexMatrix sz = spins::spin_half('z');
  ComplexMatrix sp(2, 2), sm(2, 2);
  sp << 0, 1, 0, 0;
  sm << 0, 0, 1, 0;
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);

  ComplexMatrix h_xxz =
      0.5 * params.j *
          (std::exp(Complex(0, params.phi_n)) * kron(sp, sm) +
           std::exp(Complex(0, -params.phi_n)) * kron(sm, sp)) +
      params.jz * kron(sz, sz);
  ComplexMatrix u = expm_hermitian(h_xxz, -1.0);
  u = u * expm_hermitian(kron(sz, id), -params.h_n);
  u = u * expm_hermitian(kron(id, sz), -params.h_np);
  return u;
}

ComplexMatrix su2_gate(double j) {
  GateParams p;
  p.j = j;
  p.jz = j;
  return u1_gate(p);
}

void validate_spec(const CircuitSpec& spec) {
  if (spec.system_qubits < 1 || spec.env_qubits < 0)
    throw DomainError("invalid qubit counts");
  if (spec.total_qubits() > kStatevectorCap)
    throw DimensionError("qubit count exceeds statevector cap");
  if (spec.total_qubits() % 2 != 0)
    throw DomainError("brickwork needs an even number of qubits");
}

ComplexMatrix sample_gate(const CircuitSpec& spec, Rng& rng) {
  GateParams p;
  if (spec.symmetry == CircuitSymmetry::SU2) {
    p.j = p.jz = rng.uniform(spec.exchange_min, spec.exchange_max);
  } else {
    p.j = rng.uniform(spec.exchange_min, spec.exchange_max);
    p.jz = rng.uniform(spec.exchange_min, spec.exchange_max);
    p.h_n = rng.uniform(spec.phase_min, spec.phase_max);
    p.h_np = rng.uniform(spec.phase_min, spec.phase_max);
    p.phi_n = rng.uniform(spec.phase_min, spec.phase_max);
  }
  return u1_gate(p);
}

void apply_two_qubit_gate(StateVector& psi, const ComplexMatrix& gate, int qa, int qb) {
  if (gate.rows() != 4 || gate.cols() != 4)
    throw DimensionError("two-qubit gate must be 4x4");
  if (qa == qb || qa < 0 || qb < 0 || qa >= psi.qubits || qb >= psi.qubits)
    throw DimensionError("invalid qubit pair");
  const Eigen::Index size = psi.amps.size();
  const Eigen::Index bit_a = Eigen::Index(1) << (psi.qubits - 1 - qa);
  const Eigen::Index bit_b = Eigen::Index(1) << (psi.qubits - 1 - qb);
  for (Eigen::Index base = 0; base < size; ++base) {
    if (base & (bit_a | bit_b)) continue;
    const Eigen::Index i00 = base;
    const Eigen::Index i01 = base | bit_b;
    const Eigen::Index i10 = base | bit_a;
    const Eigen::Index i11 = base | bit_a | bit_b;
    const Complex a = psi.amps[i00], b = psi.amps[i01], c = psi.amps[i10],
                  d = psi.amps[i11];
    psi.amps[i00] = gate(0, 0) * a + gate(0, 1) * b + gate(0, 2) * c + gate(0, 3) * d;
    psi.amps[i01] = gate(1, 0) * a + gate(1, 1) * b + gate(1, 2) * c + gate(1, 3) * d;
    psi.amps[i10] = gate(2, 0) * a + gate(2, 1) * b + gate(2, 2) * c + gate(2, 3) * d;
    psi.amps[i11] = gate(3, 0) * a + gate(3, 1) * b + gate(3, 2) * c + gate(3, 3) * d;
  }
}

BrickworkLayer sample_brickwork_layer(const CircuitSpec& spec, Rng& rng) {
  validate_spec(spec);
  BrickworkLayer layer;
  const int n = spec.total_qubits();
  for (int b = 0; b < n; ++b) layer.gates.push_back(sample_gate(spec, rng));
  return layer;
}

void apply_brickwork_layer(StateVector& psi, const BrickworkLayer& layer) {
  const int n = psi.qubits;
  int g = 0;
  for (int q = 0; q + 1 < n; q += 2)  // odd bonds (1,2),(3,4),...
    apply_two_qubit_gate(psi, layer.gates[g++], q, q + 1);
  for (int q = 1; q < n; q += 2)      // even bonds (2,3),...,(N,1)
    apply_two_qubit_gate(psi, layer.gates[g++], q, (q + 1) % n);
}

void brickwork_step(StateVector& psi, const CircuitSpec& spec, Rng& rng) {
  apply_brickwork_layer(psi, sample_brickwork_layer(spec, rng));
}

StateVector tilted_product_state(double theta, int n) {
  ComplexVector single(2);
  single << std::cos(0.5 * theta), std::sin(0.5 * theta);
  ComplexVector amps = ComplexVector::Ones(1);
  for (int k = 0; k < n; ++k) {
    ComplexVector next(amps.size() * 2);
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * single[0];
      next[2 * i + 1] = amps[i] * single[1];
    }
    amps = std::move(next);
  }
  return make_statevector(std::move(amps), n);
}

StateVector block_tilted_state(double theta, int block, int n) {
  if (block < 1) throw DomainError("block size must be positive");
  ComplexVector amps = ComplexVector::Ones(1);
  int placed = 0;
  while (placed < n) {
    const int b = std::min(block, n - placed);
    const Eigen::Index bd = Eigen::Index(1) << b;
    ComplexVector blk = ComplexVector::Zero(bd);
    const double c = std::pow(2.0, -b);
    blk[0] = std::cos(theta * c);
    // exp(-i theta prod_j s^y_j)|0..0> closes on the two-level pair
    // {|0..0>, |1..1>} with amplitude -i^{b+1} sin(theta / 2^b).
    Complex ipow(1, 0);
    for (int k = 0; k < b + 1; ++k) ipow *= Complex(0, 1);
    blk[bd - 1] = -ipow * std::sin(theta * c);

    ComplexVector next(amps.size() * bd);
    for (Eigen::Index i = 0; i < amps.size(); ++i)
      for (Eigen::Index j = 0; j < bd; ++j) next[i * bd + j] = amps[i] * blk[j];
    amps = std::move(next);
    placed += b;
  }
  return make_statevector(std::move(amps), n);
}

StateVector singlet_state(int n) {
  if (n % 2 != 0) throw DomainError("singlet environment needs an even qubit count");
  ComplexVector pair(4);
  pair << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  ComplexVector amps = ComplexVector::Ones(1);
  for (int k = 0; k < n / 2; ++k) {
    ComplexVector next(amps.size() * 4);
    for (Eigen::Index i = 0; i < amps.size(); ++i)
      for (Eigen::Index j = 0; j < 4; ++j) next[i * 4 + j] = amps[i] * pair[j];
    amps = std::move(next);
  }
  return make_statevector(std::move(amps), n);
}

StateVector su2_tilted_state(double theta, int n) {
  if (n % 2 != 0) throw DomainError("tilted singlet state needs an even qubit count");
  const StateVector singlets = singlet_state(n);
  ComplexVector amps = std::cos(0.5 * theta) * singlets.amps;
  amps[0] += std::sin(0.5 * theta);  // |0...0> branch, orthogonal to singlets
  return make_statevector(std::move(amps), n);
}

DensityMatrix reduced_system_state(const StateVector& psi, int system_qubits) {
  if (system_qubits < 1 || system_qubits > psi.qubits)
    throw DimensionError("invalid system size");
  const Eigen::Index ds = Eigen::Index(1) << system_qubits;
  const Eigen::Index de = Eigen::Index(1) << (psi.qubits - system_qubits);
  ComplexMatrix rho = ComplexMatrix::Zero(ds, ds);
  for (Eigen::Index i = 0; i < ds; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      Complex acc(0, 0);
      for (Eigen::Index e = 0; e < de; ++e)
        acc += psi.amps[i * de + e] * std::conj(psi.amps[j * de + e]);
      rho(i, j) = acc;
      rho(j, i) = std::conj(acc);
    }
  return make_density(rho, 1e-8);
}

ComplexMatrix markov_channel(const CircuitSpec& spec, Rng& rng) {
  validate_spec(spec);
  if (spec.system_qubits > 4)
    throw DimensionError("dense channel extraction capped at four system qubits");
  const int n = spec.total_qubits();
  const Eigen::Index dim = Eigen::Index(1) << n;
  const Eigen::Index ds = Eigen::Index(1) << spec.system_qubits;
  const Eigen::Index de = Eigen::Index(1) << spec.env_qubits;

  const BrickworkLayer layer = sample_brickwork_layer(spec, rng);
  // Columns of the step unitary, reshaped to system x environment blocks.
  std::vector<ComplexMatrix> reshaped(dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    StateVector basis{ComplexVector::Zero(dim), n};
    basis.amps[col] = 1.0;
    apply_brickwork_layer(basis, layer);
    ComplexMatrix r(ds, de);
    for (Eigen::Index s = 0; s < ds; ++s)
      for (Eigen::Index e = 0; e < de; ++e) r(s, e) = basis.amps[s * de + e];
    reshaped[col] = std::move(r);
  }

  ComplexMatrix channel = ComplexMatrix::Zero(ds * ds, ds * ds);
  for (Eigen::Index i = 0; i < ds; ++i)
    for (Eigen::Index j = 0; j < ds; ++j) {
      ComplexMatrix out = ComplexMatrix::Zero(ds, ds);
      for (Eigen::Index e = 0; e < de; ++e)
        out += reshaped[i * de + e] * reshaped[j * de + e].adjoint();
      out /= static_cast<double>(de);
      channel.col(j * ds + i) = vec(out);
    }
  return channel;
}

std::vector<DensityMatrix> nonmarkov_evolve(const CircuitSpec& spec,
                                            const StateVector& system,
                                            const StateVector& environment,
                                            int steps, Rng& rng) {
  validate_spec(spec);
  if (system.qubits != spec.system_qubits || environment.qubits != spec.env_qubits)
    throw DimensionError("system/environment sizes do not match the spec");

  StateVector joint{ComplexVector(system.amps.size() * environment.amps.size()),
                    spec.total_qubits()};
  for (Eigen::Index i = 0; i < system.amps.size(); ++i)
    joint.amps.segment(i * environment.amps.size(), environment.amps.size()) =
        system.amps[i] * environment.amps;

  std::vector<DensityMatrix> reduced;
  reduced.reserve(steps + 1);
  reduced.push_back(reduced_system_state(joint, spec.system_qubits));
  for (int t = 0; t < steps; ++t) {
    brickwork_step(joint, spec, rng);
    const double norm = joint.amps.norm();
    if (std::abs(norm - 1.0) > 1e-10)
      throw NumericalError("statevector norm drifted beyond tolerance");
    reduced.push_back(reduced_system_state(joint, spec.system_qubits));
  }
  return reduced;
}

std::vector<DensityMatrix> nonmarkov_evolve(const CircuitSpec& spec,
                                            const DensityMatrix& system,
                                            const StateVector& environment,
                                            int steps, Rng& rng) {
  // Eigen-ensemble branches share one gate sequence; dynamics is linear.
  std::vector<BrickworkLayer> layers;
  layers.reserve(steps);
  for (int t = 0; t < steps; ++t) layers.push_back(sample_brickwork_layer(spec, rng));

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(system.mat);
  std::vector<ComplexMatrix> sums(steps + 1,
                                  ComplexMatrix::Zero(system.dim(), system.dim()));
  for (Eigen::Index b = 0; b < es.eigenvalues().size(); ++b) {
    const double weight = es.eigenvalues()[b];
    if (weight < 1e-12) continue;
    StateVector branch = make_statevector(es.eigenvectors().col(b), spec.system_qubits);
    StateVector joint{ComplexVector(branch.amps.size() * environment.amps.size()),
                      spec.total_qubits()};
    for (Eigen::Index i = 0; i < branch.amps.size(); ++i)
      joint.amps.segment(i * environment.amps.size(), environment.amps.size()) =
          branch.amps[i] * environment.amps;
    sums[0] += weight * reduced_system_state(joint, spec.system_qubits).mat;
    for (int t = 0; t < steps; ++t) {
      apply_brickwork_layer(joint, layers[t]);
      sums[t + 1] += weight * reduced_system_state(joint, spec.system_qubits).mat;
    }
  }
  std::vector<DensityMatrix> reduced;
  reduced.reserve(steps + 1);
  for (auto& s : sums) reduced.push_back(make_density(s / s.trace().real(), 1e-8));
  return reduced;
}

ComplexMatrix eth_model(const EthParams& params) {
  const int n = params.env_spins + 1;
  if (n > 14) throw DimensionError("dense ETH Hamiltonian capped at 14 qubits");
  using spins::pauli_x;
  using spins::pauli_z;
  using spins::site_operator;
  const Eigen::Index d = Eigen::Index(1) << n;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  auto sz = [&](int q) { return 0.5 * site_operator(pauli_z(), q, n); };
  auto sx = [&](int q) { return 0.5 * site_operator(pauli_x(), q, n); };
  h += params.system_field * sz(0);
  h += params.system_coupling * (sx(0) * sx(1));
  for (int q = 1; q < params.env_spins; ++q)
    h += params.coupling_zz * (sz(q) * sz(q + 1));
  h += params.edge_first * sz(1);
  h += params.edge_last * sz(params.env_spins);
  for (int q = 1; q <= params.env_spins; ++q)
    h += params.field_z * sz(q) + params.field_x * sx(q);
  return h;
}

RealMatrix eth_env_hamiltonian(const EthParams& params) {
  const int n = params.env_spins;
  const Eigen::Index d = Eigen::Index(1) << n;
  RealMatrix h = RealMatrix::Zero(d, d);
  auto zbit = [&](Eigen::Index state, int q) {
    return ((state >> (n - 1 - q)) & 1) ? -0.5 : 0.5;
  };
  for (Eigen::Index s = 0; s < d; ++s) {
    double diag = 0.0;
    for (int q = 0; q + 1 < n; ++q)
      diag += params.coupling_zz * zbit(s, q) * zbit(s, q + 1);
    diag += params.edge_first * zbit(s, 0) + params.edge_last * zbit(s, n - 1);
    for (int q = 0; q < n; ++q) diag += params.field_z * zbit(s, q);
    h(s, s) = diag;
    for (int q = 0; q < n; ++q) {
      const Eigen::Index flipped = s ^ (Eigen::Index(1) << (n - 1 - q));
      h(s, flipped) += 0.5 * params.field_x;
    }
  }
  return h;
}

void eth_apply(const EthParams& params, const ComplexVector& in, ComplexVector& out) {
  const int n = params.env_spins + 1;
  const Eigen::Index d = in.size();
  if (d != (Eigen::Index(1) << n)) throw DimensionError("eth_apply size mismatch");
  out.setZero();
  auto zbit = [&](Eigen::Index state, int q) {
    return ((state >> (n - 1 - q)) & 1) ? -0.5 : 0.5;
  };
  for (Eigen::Index s = 0; s < d; ++s) {
    double diag = params.system_field * zbit(s, 0);
    for (int q = 1; q + 1 <= params.env_spins; ++q)
      diag += params.coupling_zz * zbit(s, q) * zbit(s, q + 1);
    diag += params.edge_first * zbit(s, 1) + params.edge_last * zbit(s, params.env_spins);
    for (int q = 1; q <= params.env_spins; ++q) diag += params.field_z * zbit(s, q);
    out[s] += diag * in[s];
    // Transverse fields on the environment.
    for (int q = 1; q <= params.env_spins; ++q) {
      const Eigen::Index flipped = s ^ (Eigen::Index(1) << (n - 1 - q));
      out[flipped] += 0.5 * params.field_x * in[s];
    }
    // System-bath coupling kappa s0^x s1^x.
    const Eigen::Index flipped01 =
        s ^ (Eigen::Index(1) << (n - 1)) ^ (Eigen::Index(1) << (n - 2));
    out[flipped01] += 0.25 * params.system_coupling * in[s];
  }
}

EnvSpectrum diagonalize_env(const RealMatrix& h_env) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h_env);
  EnvSpectrum env;
  env.energies = es.eigenvalues();
  env.vectors = es.eigenvectors();
  env.mean = env.energies.mean();
  env.variance = (env.energies.array() - env.mean).square().mean();
  return env;
}

double microcanonical_beta(const EnvSpectrum& env, double e) {
  return -(e - env.mean) / env.variance;
}

Eigen::Index select_by_beta(const EnvSpectrum& env, double beta) {
  const double target = env.mean - beta * env.variance;
  Eigen::Index best = 0;
  (env.energies.array() - target).abs().minCoeff(&best);
  return best;
}

Eigen::Index select_by_energy(const EnvSpectrum& env, double energy, double tol) {
  Eigen::Index best = 0;
  const double gap = (env.energies.array() - energy).abs().minCoeff(&best);
  if (gap > tol)
    throw NumericalError("no eigenstate within tolerance; nearest energy " +
                         std::to_string(env.energies[best]));
  return best;
}

ComplexVector krylov_propagate(const Matvec& apply, const ComplexVector& psi0,
                               double t, int max_subspace) {
  if (t == 0.0) return psi0;
  const double norm0 = psi0.norm();
  if (norm0 == 0.0) throw NumericalError("cannot propagate the zero vector");

  double remaining = std::abs(t);
  const double sign = t >= 0 ? 1.0 : -1.0;
  double step = remaining;
  ComplexVector psi = psi0;

  while (remaining > 1e-14) {
    step = std::min(step, remaining);
    const double norm = psi.norm();

    std::vector<ComplexVector> basis;
    std::vector<double> alpha, beta;
    basis.push_back(psi / norm);
    ComplexVector w(psi.size());
    bool happy = false;
    int m = 0;
    for (; m < max_subspace; ++m) {
      apply(basis[m], w);
      const double a = std::real(basis[m].dot(w));
      alpha.push_back(a);
      w -= a * basis[m];
      if (m > 0) w -= beta[m - 1] * basis[m - 1];
      // One reorthogonalization pass keeps the basis clean.
      for (const auto& v : basis) w -= v.dot(w) * v;
      const double b = w.norm();
      if (b < 1e-12) {
        happy = true;  // invariant subspace: propagation exact in it
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
    const int dim = static_cast<int>(alpha.size());

    RealMatrix tmat = RealMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      tmat(i, i) = alpha[i];
      if (i + 1 < dim) tmat(i, i + 1) = tmat(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(tmat);
    ComplexVector small = ComplexVector::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      Complex phase = std::exp(Complex(0, -sign * step * es.eigenvalues()[i]));
      small += phase * es.eigenvectors()(0, i) * es.eigenvectors().col(i).cast<Complex>();
    }

    // Residual estimate from the coupling out of the subspace.
    const double err = happy ? 0.0 : beta[dim - 1] * std::abs(small[dim - 1]);
    if (!happy && err > 1e-9) {
      step *= 0.5;  // halve and retry
      if (step < 1e-12) throw NumericalError("Krylov step collapsed");
      continue;
    }

    ComplexVector next = ComplexVector::Zero(psi.size());
    for (int i = 0; i < dim; ++i) next += small[i] * basis[i];
    psi = norm * next;
    remaining -= step;
    step *= 1.5;  // gentle growth after success
  }
  return psi;
}

std::vector<DensityMatrix> eth_evolve(const EthParams& params, const StateVector& psi0,
                                      const std::vector<double>& times) {
  if (psi0.qubits != params.env_spins + 1)
    throw DimensionError("state size does not match the model");
  Matvec apply = [&params](const ComplexVector& in, ComplexVector& out) {
    eth_apply(params, in, out);
  };
  std::vector<DensityMatrix> reduced;
  reduced.reserve(times.size());
  ComplexVector psi = psi0.amps;
  double current = 0.0;
  for (double t : times) {
    if (t < current) throw DomainError("times must be non-decreasing");
    if (t > current) {
      psi = krylov_propagate(apply, psi, t - current);
      current = t;
    }
    StateVector snapshot{psi / psi.norm(), psi0.qubits};
    reduced.push_back(reduced_system_state(snapshot, 1));
  }
  return reduced;
}

}  // namespace mpemba::circuits
