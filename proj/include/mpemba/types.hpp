#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpemba {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
// Relative floor under which an eigenvalue counts as zero in singular
// scalar functions (log, negative powers).
inline constexpr double kEigenvalueFloor = 1e-14;
// Largest admissible dimension product for dense kron/superoperator work.
inline constexpr long kDimensionCap = 1L << 22;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quantum state: Hermitian, unit trace, PSD (all to tolerance).
struct DensityMatrix {
  ComplexMatrix mat;

  Eigen::Index dim() const { return mat.rows(); }
};

/// Validates the DensityMatrix invariants and hermitizes round-off noise.
DensityMatrix make_density(const ComplexMatrix& m, double tol = 1e-8);

/// Classical state: nonnegative entries summing to one.
struct ProbabilityVector {
  RealVector p;

  Eigen::Index dim() const { return p.size(); }
};

ProbabilityVector make_probability(const RealVector& v);

/// Eigenvalues sorted by descending real part (ties: descending imaginary
/// part, then original index) with biorthonormal right/left modes stored
/// as matrix columns: left.col(k).adjoint() * right.col(l) == delta_kl.
struct GeneratorSpectrum {
  ComplexVector eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;

  Eigen::Index size() const { return eigenvalues.size(); }
  double biorthonormality_residual() const;
  /// Max entrywise error of sum_k lambda_k r_k l_k^dagger against m.
  double reconstruction_residual(const ComplexMatrix& m) const;
};

struct MonotoneTrajectory {
  RealVector times;
  RealVector values;
  std::string label;
};

MonotoneTrajectory make_trajectory(RealVector times, RealVector values,
                                   std::string label);

struct CrossingReport {
  std::pair<std::string, std::string> pair;
  std::vector<double> crossing_times;
  std::vector<double> uncertainties;  // bracketing grid step per crossing
  std::string method;
};

}  // namespace mpemba
