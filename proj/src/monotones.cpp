#include "mpemba/monotones.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mpemba/lindblad.hpp"
#include "mpemba/numkit.hpp"

namespace mpemba::monotones {

namespace {

constexpr double kSupportWeight = 1e-12;

struct Spectral {
  RealVector values;
  ComplexMatrix vectors;
};

Spectral spectral(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative entropy dimension mismatch");
  const Spectral r = spectral(rho.mat);
  const Spectral s = spectral(sigma.mat);
  const double rfloor = kEigenvalueFloor * std::max(1.0, r.values.cwiseAbs().maxCoeff());
  const double sfloor = kEigenvalueFloor * std::max(1.0, s.values.cwiseAbs().maxCoeff());

  double tr_rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < r.values.size(); ++i)
    if (r.values[i] > rfloor) tr_rho_log_rho += r.values[i] * std::log(r.values[i]);

  double tr_rho_log_sigma = 0.0;
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    const double weight =
        (s.vectors.col(j).adjoint() * rho.mat * s.vectors.col(j))(0, 0).real();
    if (s.values[j] <= sfloor) {
      if (weight > kSupportWeight) return std::numeric_limits<double>::infinity();
      continue;  // 0 ln 0 convention
    }
    tr_rho_log_sigma += weight * std::log(s.values[j]);
  }
  return std::max(tr_rho_log_rho - tr_rho_log_sigma, 0.0);
}

double petz_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
  if (rho.dim() != sigma.dim()) throw DimensionError("Renyi dimension mismatch");
  if (alpha == 1.0) throw DomainError("alpha = 1 is the relative entropy");
  if (!(alpha > 0.0) || alpha > 2.0) throw DomainError("alpha must lie in (0,1) or (1,2]");

  const Spectral r = spectral(rho.mat);
  const Spectral s = spectral(sigma.mat);
  const double rfloor = kEigenvalueFloor * std::max(1.0, r.values.cwiseAbs().maxCoeff());
  const double sfloor = kEigenvalueFloor * std::max(1.0, s.values.cwiseAbs().maxCoeff());

  if (alpha > 1.0) {
    // Support condition: rho must not weigh the kernel of sigma.
    for (Eigen::Index j = 0; j < s.values.size(); ++j) {
      if (s.values[j] > sfloor) continue;
      const double weight =
          (s.vectors.col(j).adjoint() * rho.mat * s.vectors.col(j))(0, 0).real();
      if (weight > kSupportWeight) return std::numeric_limits<double>::infinity();
    }
  }

  ComplexMatrix rho_a = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < r.values.size(); ++i)
    if (r.values[i] > rfloor)
      rho_a += std::pow(r.values[i], alpha) *
               (r.vectors.col(i) * r.vectors.col(i).adjoint());

  ComplexMatrix sigma_b = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index j = 0; j < s.values.size(); ++j)
    if (s.values[j] > sfloor)
      sigma_b += std::pow(s.values[j], 1.0 - alpha) *
                 (s.vectors.col(j) * s.vectors.col(j).adjoint());

  const double trace = (rho_a * sigma_b).trace().real();
  return std::max(std::log(trace) / (alpha - 1.0), 0.0);
}

double athermality(const DensityMatrix& rho, const ComplexMatrix& h_s, double beta) {
  return quantum_relative_entropy(rho, lindblad::gibbs_state(h_s, beta));
}

double free_energy(const DensityMatrix& rho, const ComplexMatrix& h_s, double beta) {
  if (beta == 0.0) throw DomainError("free energy undefined at beta = 0");
  return (rho.mat * h_s).trace().real() - von_neumann_entropy(rho) / beta;
}

double delta_free_energy(const DensityMatrix& rho, const ComplexMatrix& h_s, double beta) {
  return free_energy(rho, h_s, beta) - free_energy(lindblad::gibbs_state(h_s, beta), h_s, beta);
}

std::pair<double, double> entropy_splitting(const DensityMatrix& rho,
                                            const DensityMatrix& pi,
                                            const symmetry::GroupAction& action) {
  if ((symmetry::twirl(pi.mat, action) - pi.mat).cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("reference state is not invariant under the action");
  const DensityMatrix twirled = make_density(symmetry::twirl(rho.mat, action), 1e-8);
  const double asym = symmetry::relative_entropy_asymmetry(rho, action);
  const double sym = quantum_relative_entropy(twirled, pi);
  return {asym, sym};
}

QfiResult qfi(const DensityMatrix& rho, const ComplexMatrix& drho, QfiKind kind) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim())
    throw DimensionError("qfi derivative dimension mismatch");
  const Spectral r = spectral(rho.mat);
  const double floor = kEigenvalueFloor * std::max(1.0, r.values.cwiseAbs().maxCoeff());

  QfiResult out;
  RealVector p = r.values;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] < floor) {
      p[i] = floor;
      out.approximate = true;
    }
  if (out.approximate) p /= p.sum();

  auto f = [kind](double x) {
    switch (kind) {
      case QfiKind::SLD: return 0.5 * (x + 1.0);
      case QfiKind::WY: {
        const double s = std::sqrt(x) + 1.0;
        return 0.25 * s * s;
      }
      case QfiKind::HM: return 2.0 * x / (x + 1.0);
    }
    return 1.0;
  };

  const ComplexMatrix m = r.vectors.adjoint() * drho * r.vectors;
  double total = 0.0;
  for (Eigen::Index x = 0; x < p.size(); ++x)
    for (Eigen::Index y = 0; y < p.size(); ++y)
      total += std::norm(m(x, y)) / (p[x] * f(p[y] / p[x]));
  out.value = total;
  return out;
}

double nonstationarity(const DensityMatrix& rho, const DensityMatrix& pi) {
  return quantum_relative_entropy(rho, pi);
}

CrossingReport crossing_times(const MonotoneTrajectory& a, const MonotoneTrajectory& b) {
  if (a.times.size() != b.times.size() ||
      (a.times - b.times).cwiseAbs().maxCoeff() > 1e-12)
    throw DimensionError("crossing detection needs identical time grids");

  CrossingReport report;
  report.pair = {a.label, b.label};
  report.method = "linear interpolation between bracketing samples";
  for (Eigen::Index i = 0; i + 1 < a.times.size(); ++i) {
    const double d0 = a.values[i] - b.values[i];
    const double d1 = a.values[i + 1] - b.values[i + 1];
    if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) {
      const double frac = d0 / (d0 - d1);
      report.crossing_times.push_back(a.times[i] + frac * (a.times[i + 1] - a.times[i]));
      report.uncertainties.push_back(a.times[i + 1] - a.times[i]);
    }
  }
  return report;
}

}  // namespace mpemba::monotones
