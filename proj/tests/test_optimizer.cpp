#include "mpemba/optimizer.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpemba/numkit.hpp"
#include "mpemba/spins.hpp"
#include "oracles.hpp"

using namespace mpemba;
using namespace mpemba::optimizer;

TEST_CASE("classical overlap cost") {
  auto gen = classical::build_z4_generator(0.25);
  CHECK(overlap_cost_classical(gen.stationary, gen, 2) ==
        doctest::Approx(0.0).epsilon(1e-12));

  RealVector fast(4);
  fast << 0.5, 0.0, 0.5, 0.0;
  CHECK(overlap_cost_classical(make_probability(fast), gen, 2) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Direct-sum oracle on a detailed-balance chain via the pi-weighted form.
  classical::IsingChainParams params;
  params.spins = 4;
  auto chain = classical::build_detailed_balance_generator(
      classical::ising_energies(params), 1.0, classical::single_spin_flip_adjacency(4));
  Rng rng(71);
  auto p = make_probability(oracles::random_probability(16, rng));
  double direct = 0.0;
  for (int k = 1; k <= 3; ++k) {
    Complex overlap = 0.0;
    for (Eigen::Index i = 0; i < 16; ++i)
      overlap += p.p[i] * chain.spectrum.right(i, k) / chain.stationary.p[i];
    direct += std::abs(overlap);
  }
  CHECK(overlap_cost_classical(p, chain, 3) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("metropolis_permute leaves a zero-cost state unchanged") {
  auto gen = classical::build_z4_generator(0.25);
  RealVector fast(4);
  fast << 0.5, 0.0, 0.5, 0.0;
  MetropolisConfig cfg;
  cfg.slow_mode_count = 2;
  cfg.iterations = 200;
  cfg.seed = 7;
  auto result = metropolis_permute(gen, make_probability(fast), cfg);
  CHECK((result.p_opt.p - fast).cwiseAbs().maxCoeff() == 0.0);
  CHECK(result.cost_history.front() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("metropolis_permute reaches the exhaustive optimum on four states") {
  std::vector<double> energies = {0.0, 0.4, 1.1, 1.7};
  auto gen = classical::build_detailed_balance_generator(
      energies, 1.0, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  RealVector p(4);
  p << 0.6, 0.2, 0.15, 0.05;
  auto p0 = make_probability(p);

  double best = 1e300;
  std::vector<int> idx = {0, 1, 2, 3};
  std::sort(idx.begin(), idx.end());
  do {
    RealVector candidate(4);
    for (int i = 0; i < 4; ++i) candidate[i] = p[idx[i]];
    best = std::min(best, overlap_cost_classical(make_probability(candidate), gen, 1));
  } while (std::next_permutation(idx.begin(), idx.end()));

  MetropolisConfig cfg;
  cfg.slow_mode_count = 1;
  cfg.iterations = 2000;
  cfg.seed = 3;
  auto result = metropolis_permute(gen, p0, cfg);
  CHECK(overlap_cost_classical(result.p_opt, gen, 1) ==
        doctest::Approx(best).epsilon(1e-10));

  // The output is a permutation of the input entries.
  RealVector sorted_in = p0.p, sorted_out = result.p_opt.p;
  std::sort(sorted_in.begin(), sorted_in.end());
  std::sort(sorted_out.begin(), sorted_out.end());
  CHECK((sorted_in - sorted_out).cwiseAbs().maxCoeff() == 0.0);

  // Permutation bookkeeping maps input entries to their final slots.
  for (Eigen::Index i = 0; i < 4; ++i)
    CHECK(result.p_opt.p[result.permutation[i]] == p0.p[i]);
}

TEST_CASE("metropolis_permute is deterministic and improves the cost") {
  classical::IsingChainParams params;
  params.spins = 5;
  params.coupling = -0.4;
  params.field = 0.2;
  auto gen = classical::build_detailed_balance_generator(
      classical::ising_energies(params), 1.0, classical::single_spin_flip_adjacency(5));
  auto p0 = classical::gibbs_vector(classical::ising_energies(params), 0.5);

  MetropolisConfig cfg;
  cfg.slow_mode_count = 2;
  cfg.iterations = 4000;
  cfg.seed = 11;
  auto a = metropolis_permute(gen, p0, cfg);
  auto b = metropolis_permute(gen, p0, cfg);
  CHECK((a.p_opt.p - b.p_opt.p).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.cost_history == b.cost_history);

  const double initial = overlap_cost_classical(p0, gen, 2);
  const double final_cost = overlap_cost_classical(a.p_opt, gen, 2);
  CHECK(final_cost <= initial);
  CHECK(final_cost < 1e-3 * initial);

  // Best-so-far envelope of the history never increases.
  double best = a.cost_history.front();
  for (double c : a.cost_history) {
    best = std::min(best, c);
    CHECK(best <= a.cost_history.front() + 1e-15);
  }
}

TEST_CASE("quantum overlap cost recovers aligned coefficients") {
  auto model = lindblad::z4_quantum_model(1.0, 0.25);
  auto spec = lindblad::diagonalize_superop(lindblad::build_lindbladian(model));

  CHECK(overlap_cost_quantum(spec.steady, spec, 2) == doctest::Approx(0.0).epsilon(1e-10));

  // Mix the steady state with one decaying mode; the cost at K = 1 is the
  // injected coefficient.
  const ComplexMatrix r1 = spec.right_mode(1);
  const double c = 0.05;
  ComplexMatrix mixed = spec.steady.mat + c * (r1 + r1.adjoint());
  mixed /= mixed.trace().real();
  DensityMatrix rho = make_density(mixed, 1e-8);
  ComplexVector overlaps = lindblad::superop_overlaps(spec, rho);
  CHECK(overlap_cost_quantum(rho, spec, 1) ==
        doctest::Approx(std::abs(overlaps[1])).epsilon(1e-10));

  // Summing a degenerate group is invariant under mode relabeling.
  double forward = 0.0, backward = 0.0;
  for (int k = 1; k <= 3; ++k) forward += std::abs(overlaps[k]);
  for (int k = 3; k >= 1; --k) backward += std::abs(overlaps[k]);
  CHECK(forward == doctest::Approx(backward));
}

TEST_CASE("metropolis_rotate aligns the Davies qubit with the incoherent axis") {
  const ComplexMatrix h = 10.0 * spins::spin_half('z');
  auto spec = lindblad::diagonalize_superop(
      lindblad::build_lindbladian(lindblad::davies_generator(h, 0.1)));

  ComplexMatrix rho = 0.5 * (ComplexMatrix::Identity(2, 2) +
                             0.221 * spins::pauli_x() + 0.867 * spins::pauli_y() +
                             0.206 * spins::pauli_z());
  DensityMatrix rho0 = make_density(rho);

  MetropolisConfig cfg;
  cfg.slow_mode_count = 2;  // the conjugate coherence pair
  cfg.iterations = 4000;
  cfg.seed = 5;
  auto result = metropolis_rotate(spec, rho0, cfg);

  const double r = std::sqrt(0.221 * 0.221 + 0.867 * 0.867 + 0.206 * 0.206);
  const double rx = (result.rho_opt.mat * spins::pauli_x()).trace().real();
  const double ry = (result.rho_opt.mat * spins::pauli_y()).trace().real();
  const double rz = (result.rho_opt.mat * spins::pauli_z()).trace().real();
  CHECK(std::abs(rx) < 1e-2);
  CHECK(std::abs(ry) < 1e-2);
  CHECK(std::abs(std::abs(rz) - r) < 1e-3);

  // Unitary orbit: the state spectrum is preserved.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> before(rho0.mat, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> after(result.rho_opt.mat,
                                                     Eigen::EigenvaluesOnly);
  CHECK((before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);

  // The accumulated rotation reproduces the optimized state.
  ComplexMatrix rebuilt = result.rotation * rho0.mat * result.rotation.adjoint();
  CHECK((rebuilt - result.rho_opt.mat).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((result.rotation * result.rotation.adjoint() -
         ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("metropolis_rotate matches a dense qubit grid search") {
  const ComplexMatrix h = 10.0 * spins::spin_half('z');
  auto spec = lindblad::diagonalize_superop(
      lindblad::build_lindbladian(lindblad::davies_generator(h, 0.1)));
  ComplexMatrix rho = 0.5 * (ComplexMatrix::Identity(2, 2) + 0.4 * spins::pauli_x() +
                             0.1 * spins::pauli_y() + 0.6 * spins::pauli_z());
  DensityMatrix rho0 = make_density(rho);

  double grid_best = 1e300;
  for (int a = 0; a <= 60; ++a)
    for (int b = 0; b <= 60; ++b) {
      const double theta = 3.14159265358979324 * a / 60.0;
      const double phi = 2.0 * 3.14159265358979324 * b / 60.0;
      ComplexMatrix n_dot_sigma = std::sin(theta) * std::cos(phi) * spins::pauli_x() +
                                  std::sin(theta) * std::sin(phi) * spins::pauli_y() +
                                  std::cos(theta) * spins::pauli_z();
      for (int c = 1; c <= 30; ++c) {
        const double angle = 3.14159265358979324 * c / 30.0;
        ComplexMatrix u = std::cos(0.5 * angle) * ComplexMatrix::Identity(2, 2) -
                          Complex(0, 1) * std::sin(0.5 * angle) * n_dot_sigma;
        DensityMatrix cand = make_density(u * rho0.mat * u.adjoint(), 1e-8);
        grid_best = std::min(grid_best, overlap_cost_quantum(cand, spec, 1));
      }
    }

  MetropolisConfig cfg;
  cfg.slow_mode_count = 1;
  cfg.iterations = 6000;
  cfg.seed = 13;
  auto result = metropolis_rotate(spec, rho0, cfg);
  CHECK(overlap_cost_quantum(result.rho_opt, spec, 1) <= grid_best + 1e-3);
}

TEST_CASE("config validation") {
  auto gen = classical::build_z4_generator(0.1);
  MetropolisConfig cfg;
  cfg.slow_mode_count = 3;  // dimension 4 allows at most K = 2
  CHECK_THROWS_AS((void)metropolis_permute(gen, gen.stationary, cfg), DomainError);
  cfg.slow_mode_count = 1;
  cfg.iterations = 0;
  CHECK_THROWS_AS((void)metropolis_permute(gen, gen.stationary, cfg), DomainError);
}
