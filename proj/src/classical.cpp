#include "mpemba/classical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpemba/numkit.hpp"

namespace mpemba::classical {

namespace {

// Deterministic sign: component of largest magnitude positive.
void canonicalize_real_column(Eigen::Ref<RealVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
}

GeneratorSpectrum detailed_balance_spectrum(const RealMatrix& gen,
                                            const RealVector& pi) {
  const Eigen::Index n = gen.rows();
  RealVector sqrt_pi = pi.cwiseSqrt();
  RealMatrix sym(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      sym(i, j) = gen(i, j) * sqrt_pi[j] / sqrt_pi[i];
  sym = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);

  GeneratorSpectrum spec;
  spec.eigenvalues.resize(n);
  spec.right.resize(n, n);
  spec.left.resize(n, n);
  // SelfAdjointEigenSolver sorts ascending; we want descending real part.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    RealVector v = es.eigenvectors().col(src);
    canonicalize_real_column(v);
    spec.eigenvalues[k] = es.eigenvalues()[src];
    spec.right.col(k) = (sqrt_pi.array() * v.array()).matrix().cast<Complex>();
    spec.left.col(k) = (v.array() / sqrt_pi.array()).matrix().cast<Complex>();
  }
  return spec;
}

void check_generator(const RealMatrix& m, const RealVector& pi) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (std::abs(m.col(j).sum()) > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw NumericalError("generator columns do not sum to zero");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) < 0)
        throw NumericalError("negative off-diagonal rate");
  }
  if ((m * pi).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("generator does not annihilate the stationary vector");
}

}  // namespace

double ising_energy(const std::vector<int>& config, const IsingChainParams& params) {
  if (static_cast<int>(config.size()) != params.spins)
    throw DimensionError("spin configuration length mismatch");
  for (int s : config)
    if (s != 1 && s != -1) throw DomainError("spin values must be +1 or -1");
  double interaction = 0.0, field = 0.0;
  for (int n = 0; n < params.spins; ++n) {
    const int next = (n + 1 < params.spins) ? config[n + 1] : +1;  // virtual spin
    interaction += config[n] * next;
    field += config[n];
  }
  return -params.coupling * interaction - params.field * field;
}

std::vector<double> ising_energies(const IsingChainParams& params) {
  if (params.spins < 2) throw DomainError("chain needs at least two spins");
  const long states = 1L << params.spins;
  if (states > kDimensionCap) throw DimensionError("state count exceeds cap");
  std::vector<double> energies(states);
  std::vector<int> config(params.spins);
  for (long i = 0; i < states; ++i) {
    for (int n = 0; n < params.spins; ++n)
      config[n] = ((i >> n) & 1) ? -1 : +1;
    energies[i] = ising_energy(config, params);
  }
  return energies;
}

std::vector<std::pair<int, int>> single_spin_flip_adjacency(int spins) {
  std::vector<std::pair<int, int>> pairs;
  const long states = 1L << spins;
  for (long i = 0; i < states; ++i)
    for (int n = 0; n < spins; ++n) {
      const long j = i ^ (1L << n);
      if (j > i) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return pairs;
}

ClassicalGenerator build_detailed_balance_generator(
    const std::vector<double>& energies, double beta,
    const std::vector<std::pair<int, int>>& adjacency, RateConvention convention) {
  const Eigen::Index n = static_cast<Eigen::Index>(energies.size());
  if (n < 2) throw DimensionError("need at least two states");

  // Connectivity: a unique stationary state needs one component.
  std::vector<std::vector<int>> nbrs(n);
  for (auto [a, b] : adjacency) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw DimensionError("adjacency pair out of range");
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : nbrs[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw NumericalError("adjacency disconnected: stationary state not unique");

  RealMatrix m = RealMatrix::Zero(n, n);
  auto rate = [&](Eigen::Index to, Eigen::Index from) {
    const double de = energies[to] - energies[from];
    if (convention == RateConvention::ArrheniusSymmetric)
      return std::exp(-0.5 * beta * de);
    return 1.0 / (1.0 + std::exp(beta * de));
  };
  for (auto [a, b] : adjacency) {
    m(a, b) = rate(a, b);
    m(b, a) = rate(b, a);
  }
  for (Eigen::Index j = 0; j < n; ++j) m(j, j) = -(m.col(j).sum() - m(j, j));

  ProbabilityVector pi = gibbs_vector(energies, beta);
  check_generator(m, pi.p);

  ClassicalGenerator gen{std::move(m), std::move(pi), true, {}};
  gen.spectrum = detailed_balance_spectrum(gen.matrix, gen.stationary.p);
  return gen;
}

ClassicalGenerator build_z4_generator(double eps) {
  if (!(std::abs(eps) < 1.0)) throw DomainError("chirality parameter must satisfy |eps| < 1");
  RealMatrix m = RealMatrix::Zero(4, 4);
  for (int n = 0; n < 4; ++n) {
    m(n, n) = -2.0;
    m(n, (n + 1) % 4) = 1.0 + eps;  // clockwise inflow n+1 -> n
    m(n, (n + 3) % 4) = 1.0 - eps;
  }
  ProbabilityVector pi = make_probability(RealVector::Constant(4, 0.25));
  check_generator(m, pi.p);
  ClassicalGenerator gen{std::move(m), std::move(pi), std::abs(eps) < 1e-15, {}};
  gen.spectrum = eig_general(gen.matrix.cast<Complex>());
  return gen;
}

ProbabilityVector evolve_classical(const ClassicalGenerator& gen,
                                   const ProbabilityVector& p0, double t) {
  if (t < 0) throw DomainError("negative evolution time");
  if (p0.dim() != gen.dim()) throw DimensionError("state/generator size mismatch");

  RealVector result;
  const ComplexMatrix gm = gen.matrix.cast<Complex>();
  if (gen.spectrum.size() == gen.dim() &&
      gen.spectrum.reconstruction_residual(gm) < 1e-6) {
    ComplexVector a = gen.spectrum.left.adjoint() * p0.p.cast<Complex>();
    ComplexVector evolved = ComplexVector::Zero(gen.dim());
    for (Eigen::Index k = 0; k < gen.spectrum.size(); ++k)
      evolved += a[k] * std::exp(gen.spectrum.eigenvalues[k] * t) *
                 gen.spectrum.right.col(k);
    result = evolved.real();
  } else {
    RealMatrix propagator = (t * gen.matrix).exp();
    result = propagator * p0.p;
  }

  for (Eigen::Index i = 0; i < result.size(); ++i)
    if (result[i] < 0 && result[i] > -1e-12) result[i] = 0.0;
  result /= result.sum();
  return make_probability(result);
}

ComplexVector spectral_overlaps(const ClassicalGenerator& gen,
                                const ProbabilityVector& p) {
  if (gen.stationary.p.minCoeff() < 1e-14)
    throw NumericalError("stationary entry too small for pi-weighting");
  ComplexVector a = gen.spectrum.left.adjoint() * p.p.cast<Complex>();
  ComplexVector rebuilt = gen.spectrum.right * a;
  if ((rebuilt - p.p.cast<Complex>()).cwiseAbs().maxCoeff() > 1e-8)
    throw NumericalError("spectral expansion does not reconstruct the state");
  return a;
}

double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.dim() != q.dim()) throw DimensionError("KL dimension mismatch");
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (p.p[i] <= 0.0) continue;
    if (q.p[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p.p[i] * std::log(p.p[i] / q.p[i]);
  }
  return std::max(d, 0.0);
}

double renyi_divergence(const ProbabilityVector& p, const ProbabilityVector& q,
                        double alpha) {
  if (p.dim() != q.dim()) throw DimensionError("Renyi dimension mismatch");
  if (alpha == 1.0)
    throw DomainError("alpha = 1 is the KL divergence; call kl_divergence");
  if (!(alpha > 0.0) || alpha > 2.0)
    throw DomainError("alpha must lie in (0,1) or (1,2]");
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (p.p[i] <= 0.0) continue;
    if (q.p[i] <= 0.0) {
      if (alpha > 1.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    s += std::pow(p.p[i], alpha) * std::pow(q.p[i], 1.0 - alpha);
  }
  return std::log(s) / (alpha - 1.0);
}

std::pair<double, double> asymptotic_kl_predictor(const ClassicalGenerator& gen,
                                                  const ProbabilityVector& p0) {
  ComplexVector a = spectral_overlaps(gen, p0);
  double lead = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < gen.spectrum.size(); ++k) {
    if (std::abs(gen.spectrum.eigenvalues[k]) < 1e-9) continue;  // stationary
    if (std::abs(a[k]) <= 1e-10) continue;
    lead = std::max(lead, gen.spectrum.eigenvalues[k].real());
  }
  if (!std::isfinite(lead))
    throw NumericalError("state has no overlap with any decaying mode");

  double prefactor = 0.0;
  for (Eigen::Index k = 0; k < gen.spectrum.size(); ++k) {
    if (std::abs(gen.spectrum.eigenvalues[k]) < 1e-9) continue;
    if (std::abs(a[k]) <= 1e-10) continue;
    if (gen.spectrum.eigenvalues[k].real() < lead - 1e-9) continue;
    double quad = 0.0;
    for (Eigen::Index i = 0; i < gen.dim(); ++i)
      quad += std::norm(gen.spectrum.right(i, k)) / gen.stationary.p[i];
    prefactor += 0.5 * std::norm(a[k]) * quad;
  }
  return {2.0 * lead, prefactor};
}

ProbabilityVector twirl_discrete_classical(const ProbabilityVector& p,
                                           const std::vector<std::vector<int>>& group) {
  const Eigen::Index n = p.dim();
  if (group.empty()) throw NumericalError("empty permutation set");
  std::set<std::vector<int>> members;
  for (const auto& g : group) {
    if (static_cast<Eigen::Index>(g.size()) != n)
      throw DimensionError("permutation length mismatch");
    std::vector<bool> hit(n, false);
    for (int x : g) {
      if (x < 0 || x >= n || hit[x]) throw NumericalError("not a permutation");
      hit[x] = true;
    }
    members.insert(g);
  }
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  if (!members.count(identity))
    throw NumericalError("permutation set lacks the identity");
  for (const auto& g : group)
    for (const auto& h : group) {
      std::vector<int> comp(n);
      for (Eigen::Index i = 0; i < n; ++i) comp[i] = g[h[i]];
      if (!members.count(comp))
        throw NumericalError("permutation set not closed under composition");
    }

  RealVector avg = RealVector::Zero(n);
  for (const auto& g : group) {
    RealVector moved(n);
    for (Eigen::Index i = 0; i < n; ++i) moved[g[i]] = p.p[i];
    avg += moved;
  }
  avg /= static_cast<double>(group.size());
  return make_probability(avg);
}

double classical_asymmetry(const ProbabilityVector& p,
                           const std::vector<std::vector<int>>& group) {
  return kl_divergence(p, twirl_discrete_classical(p, group));
}

std::vector<std::vector<int>> cyclic_group(int length) {
  std::vector<std::vector<int>> group;
  for (int s = 0; s < length; ++s) {
    std::vector<int> g(length);
    for (int i = 0; i < length; ++i) g[i] = (i + s) % length;
    group.push_back(std::move(g));
  }
  return group;
}

ProbabilityVector gibbs_vector(const std::vector<double>& energies, double beta) {
  const Eigen::Index n = static_cast<Eigen::Index>(energies.size());
  RealVector w(n);
  const double emin = *std::min_element(energies.begin(), energies.end());
  for (Eigen::Index i = 0; i < n; ++i) w[i] = std::exp(-beta * (energies[i] - emin));
  w /= w.sum();
  return make_probability(w);
}

}  // namespace mpemba::classical
