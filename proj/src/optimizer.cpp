#include "mpemba/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpemba/numkit.hpp"
#include "mpemba/rng.hpp"

namespace mpemba::optimizer {

namespace {

void validate(const MetropolisConfig& cfg, Eigen::Index dim) {
  if (cfg.slow_mode_count < 1 || cfg.slow_mode_count >= dim - 1)
    throw DomainError("slow mode count must satisfy 1 <= K < dimension - 1");
  if (cfg.iterations < 1) throw DomainError("need at least one iteration");
}

double schedule_slope(const MetropolisConfig& cfg) {
  if (cfg.schedule >= 0.0) return cfg.schedule;
  return 99.0 * cfg.initial_inverse_temperature / static_cast<double>(cfg.iterations);
}

// Metropolis acceptance on a cost decrease-or-probabilistic rule.
bool accept(double delta, double t_eff, Rng& rng) {
  if (delta <= 0.0) return true;
  return rng.uniform() < std::exp(-t_eff * delta);
}

}  // namespace

double overlap_cost_classical(const ProbabilityVector& p,
                              const classical::ClassicalGenerator& gen, int k) {
  if (k < 1 || k >= gen.dim() - 1) throw DomainError("invalid slow mode count");
  const ComplexVector a = classical::spectral_overlaps(gen, p);
  double cost = 0.0;
  for (int m = 1; m <= k; ++m) cost += std::abs(a[m]);
  return cost;
}

PermutationResult metropolis_permute(const classical::ClassicalGenerator& gen,
                                     const ProbabilityVector& p0,
                                     const MetropolisConfig& cfg) {
  const Eigen::Index n = p0.dim();
  validate(cfg, n);
  Rng rng(cfg.seed);

  // Cost via the K slow left modes only; avoids a full reconstruction
  // check per move.
  const int k = cfg.slow_mode_count;
  ComplexMatrix slow_left(n, k);
  for (int m = 0; m < k; ++m) slow_left.col(m) = gen.spectrum.left.col(m + 1);
  auto cost_of = [&](const RealVector& p) {
    return (slow_left.adjoint() * p.cast<Complex>()).cwiseAbs().sum();
  };

  RealVector current = p0.p;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double cost = cost_of(current);

  RealVector best = current;
  std::vector<int> best_perm = perm;
  double best_cost = cost;

  PermutationResult result;
  result.cost_history.reserve(cfg.iterations + 1);
  result.cost_history.push_back(cost);

  double t_eff = cfg.initial_inverse_temperature;
  const double slope = schedule_slope(cfg);

  for (long it = 0; it < cfg.iterations; ++it) {
    // Pick 4 distinct entries and shuffle them uniformly.
    int idx[4];
    for (int a = 0; a < 4; ++a) {
      bool fresh;
      do {
        idx[a] = static_cast<int>(rng.below(n));
        fresh = true;
        for (int b = 0; b < a; ++b) fresh = fresh && idx[a] != idx[b];
      } while (!fresh);
    }
    int target[4] = {idx[0], idx[1], idx[2], idx[3]};
    for (int a = 3; a > 0; --a) std::swap(target[a], target[rng.below(a + 1)]);

    RealVector proposal = current;
    for (int a = 0; a < 4; ++a) proposal[target[a]] = current[idx[a]];
    const double proposal_cost = cost_of(proposal);

    if (accept(proposal_cost - cost, t_eff, rng)) {
      std::vector<int> updated = perm;
      for (Eigen::Index i = 0; i < n; ++i)
        for (int a = 0; a < 4; ++a)
          if (perm[i] == idx[a]) updated[i] = target[a];
      perm = std::move(updated);
      current = std::move(proposal);
      cost = proposal_cost;
      t_eff += cfg.decreasing_schedule ? -slope : slope;
      if (t_eff < 0.0) t_eff = 0.0;
      if (cost < best_cost) {
        best_cost = cost;
        best = current;
        best_perm = perm;
      }
    }
    result.cost_history.push_back(cost);
  }

  if (cfg.polish) {
    // Greedy pair-swap descent from the best state found.
    bool improved = true;
    while (improved) {
      improved = false;
      for (Eigen::Index i = 0; i < n && !improved; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (best[i] == best[j]) continue;
          RealVector trial = best;
          std::swap(trial[i], trial[j]);
          const double c = cost_of(trial);
          if (c < best_cost - 1e-15) {
            best = std::move(trial);
            best_cost = c;
            for (Eigen::Index s = 0; s < n; ++s) {
              if (best_perm[s] == i) best_perm[s] = static_cast<int>(j);
              else if (best_perm[s] == j) best_perm[s] = static_cast<int>(i);
            }
            improved = true;
            break;
          }
        }
    }
    result.cost_history.push_back(best_cost);
  }

  result.p_opt = make_probability(best);
  result.permutation = std::move(best_perm);
  return result;
}

double overlap_cost_quantum(const DensityMatrix& rho,
                            const lindblad::SuperopSpectrum& spec, int k) {
  if (k < 1 || k >= spec.spec.size() - 1) throw DomainError("invalid slow mode count");
  const ComplexVector v = vec(rho.mat);
  double cost = 0.0;
  for (int m = 1; m <= k; ++m)
    cost += std::abs((spec.spec.left.col(m).adjoint() * v)(0, 0));
  return cost;
}

RotationResult metropolis_rotate(const lindblad::SuperopSpectrum& spec,
                                 const DensityMatrix& rho0,
                                 const MetropolisConfig& cfg) {
  const Eigen::Index d = rho0.dim();
  validate(cfg, spec.spec.size());
  Rng rng(cfg.seed);

  const int k = cfg.slow_mode_count;
  ComplexMatrix slow_left(d * d, k);
  for (int m = 0; m < k; ++m) slow_left.col(m) = spec.spec.left.col(m + 1);
  auto cost_of = [&](const ComplexMatrix& rho) {
    return (slow_left.adjoint() * vec(rho)).cwiseAbs().sum();
  };

  ComplexMatrix current = rho0.mat;
  ComplexMatrix rotation = ComplexMatrix::Identity(d, d);
  double cost = cost_of(current);

  ComplexMatrix best = current, best_rotation = rotation;
  double best_cost = cost;

  RotationResult result;
  result.cost_history.reserve(cfg.iterations + 1);
  result.cost_history.push_back(cost);

  double t_eff = cfg.initial_inverse_temperature;
  const double slope = schedule_slope(cfg);

  for (long it = 0; it < cfg.iterations; ++it) {
    Eigen::Index i = static_cast<Eigen::Index>(rng.below(d));
    Eigen::Index j = static_cast<Eigen::Index>(rng.below(d - 1));
    if (j >= i) ++j;
    const double angle = 0.1 * rng.normal();
    const double phase = rng.uniform(0.0, 6.283185307179586);
    ComplexMatrix givens = ComplexMatrix::Identity(d, d);
    givens(i, i) = std::cos(angle);
    givens(j, j) = std::cos(angle);
    givens(i, j) = -std::exp(Complex(0, phase)) * std::sin(angle);
    givens(j, i) = std::exp(Complex(0, -phase)) * std::sin(angle);

    const ComplexMatrix proposal = givens * current * givens.adjoint();
    const double proposal_cost = cost_of(proposal);
    if (accept(proposal_cost - cost, t_eff, rng)) {
      current = proposal;
      rotation = givens * rotation;
      cost = proposal_cost;
      t_eff += cfg.decreasing_schedule ? -slope : slope;
      if (t_eff < 0.0) t_eff = 0.0;
      if (cost < best_cost) {
        best_cost = cost;
        best = current;
        best_rotation = rotation;
      }
    }
    result.cost_history.push_back(cost);
  }

  result.rho_opt = make_density(hermitize(best), 1e-8);
  result.rotation = std::move(best_rotation);
  return result;
}

}  // namespace mpemba::optimizer
