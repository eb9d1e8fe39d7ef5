#pragma once

#include <array>
#include <utility>

#include "mpemba/symmetry.hpp"
#include "mpemba/types.hpp"

namespace mpemba::monotones {

/// Tr[rho (ln rho - ln sigma)]; +inf when the support condition fails.
double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// (alpha-1)^{-1} ln Tr[rho^alpha sigma^{1-alpha}], alpha in (0,1) or (1,2].
double petz_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);

/// S(rho || pi_beta) with pi_beta the Gibbs state of h_s.
double athermality(const DensityMatrix& rho, const ComplexMatrix& h_s, double beta);

/// Tr[rho H] - S(rho)/beta.
double free_energy(const DensityMatrix& rho, const ComplexMatrix& h_s, double beta);

/// F(rho) - F(pi_beta) = athermality / beta.
double delta_free_energy(const DensityMatrix& rho, const ComplexMatrix& h_s, double beta);

/// (S(rho || twirl rho), S(twirl rho || pi)); the two terms sum to
/// S(rho || pi) for any invariant pi.
std::pair<double, double> entropy_splitting(const DensityMatrix& rho,
                                            const DensityMatrix& pi,
                                            const symmetry::GroupAction& action);

enum class QfiKind { SLD, WY, HM };

struct QfiResult {
  double value = 0.0;
  bool approximate = false;  // rank-deficient input lifted to the floor
};

/// Quantum Fisher information of the time parameter,
/// sum_{x,y} |<x|drho|y>|^2 / (p_x f(p_y/p_x)) in the eigenbasis of rho.
QfiResult qfi(const DensityMatrix& rho, const ComplexMatrix& drho, QfiKind kind);

/// S(rho || pi) against a possibly non-Gibbs fixed point.
double nonstationarity(const DensityMatrix& rho, const DensityMatrix& pi);

/// All sign changes of a - b located by linear interpolation.
CrossingReport crossing_times(const MonotoneTrajectory& a, const MonotoneTrajectory& b);

/// Fixed alpha sweep for crossing-time insets; 1.0 maps to the relative
/// entropy.
inline constexpr std::array<double, 7> kAlphaGrid = {0.4, 0.6, 0.8, 1.0,
                                                     1.2, 1.5, 2.0};

}  // namespace mpemba::monotones
