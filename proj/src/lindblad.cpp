#include "mpemba/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpemba/numkit.hpp"
#include "mpemba/spins.hpp"

namespace mpemba::lindblad {

ComplexMatrix SuperopSpectrum::right_mode(Eigen::Index k) const {
  return unvec(spec.right.col(k), dim, dim);
}

ComplexMatrix SuperopSpectrum::left_mode(Eigen::Index k) const {
  return unvec(spec.left.col(k), dim, dim);
}

ComplexMatrix build_lindbladian(const LindbladModel& model) {
  const Eigen::Index d = model.dim();
  if (model.hamiltonian.cols() != d)
    throw DimensionError("Hamiltonian not square");
  if ((model.hamiltonian - model.hamiltonian.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw NumericalError("Hamiltonian not Hermitian within tolerance");
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  ComplexMatrix s = Complex(0, -1) * (vectorize_superop(model.hamiltonian, id) -
                                      vectorize_superop(id, model.hamiltonian.adjoint()));
  for (const auto& jump : model.jumps) {
    if (jump.rows() != d || jump.cols() != d)
      throw DimensionError("jump operator dimension mismatch");
    const ComplexMatrix jj = jump.adjoint() * jump;
    s += vectorize_superop(jump, jump);
    s -= 0.5 * vectorize_superop(jj, id);
    s -= 0.5 * vectorize_superop(id, jj);
  }
  return s;
}

LindbladModel davies_generator(const ComplexMatrix& h_s, double beta,
                               BathStatistics stats) {
  if ((h_s - h_s.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw NumericalError("Davies construction needs a Hermitian Hamiltonian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(h_s));
  const RealVector energy = es.eigenvalues();
  const ComplexMatrix& basis = es.eigenvectors();
  const Eigen::Index d = energy.size();

  LindbladModel model;
  model.hamiltonian = hermitize(h_s);
  const double scale = std::max(1.0, energy.cwiseAbs().maxCoeff());
  for (Eigen::Index lo = 0; lo < d; ++lo) {
    for (Eigen::Index hi = lo + 1; hi < d; ++hi) {
      const double x = beta * (energy[hi] - energy[lo]);
      double rate_down, rate_up;  // hi -> lo resp. lo -> hi
      if (stats == BathStatistics::Fermionic) {
        rate_down = 1.0 / (1.0 + std::exp(-x));
        rate_up = 1.0 / (1.0 + std::exp(x));
      } else if (std::abs(x) < 1e-12 * scale) {
        rate_down = rate_up = 0.5;  // degenerate level: symmetric classical rate
      } else {
        const double n = 1.0 / std::expm1(std::abs(x));
        rate_down = 1.0 + n;
        rate_up = n;
        if (x < 0) std::swap(rate_down, rate_up);
      }
      const ComplexVector klo = basis.col(lo), khi = basis.col(hi);
      model.jumps.push_back(std::sqrt(rate_down) * (klo * khi.adjoint()));
      model.jumps.push_back(std::sqrt(rate_up) * (khi * klo.adjoint()));
    }
  }
  return model;
}

LindbladModel z4_quantum_model(double hopping, double eps) {
  if (std::abs(eps) > 1.0) throw DomainError("|eps| must not exceed 1");
  const Eigen::Index d = 4;
  LindbladModel model;
  model.hamiltonian = ComplexMatrix::Zero(d, d);
  for (int n = 0; n < 4; ++n) {
    model.hamiltonian(n, (n + 1) % 4) += hopping;
    model.hamiltonian((n + 1) % 4, n) += hopping;
  }
  auto ket = [&](int n) {
    ComplexVector v = ComplexVector::Zero(d);
    v[(n % 4 + 4) % 4] = 1.0;
    return v;
  };
  for (int n = 0; n < 4; ++n) {
    model.jumps.push_back(std::sqrt(1.0 + eps) * (ket(n + 1) * ket(n).adjoint()));
    model.jumps.push_back(std::sqrt(1.0 - eps) * (ket(n - 1) * ket(n).adjoint()));
  }
  return model;
}

LindbladModel all_to_all_model(int n_s, double omega, double delta, double v,
                               double kappa) {
  if (n_s < 1) throw DomainError("need at least one atom");
  const auto s = spins::collective_spin(n_s);
  LindbladModel model;
  model.hamiltonian =
      omega * s.sx - delta * s.sz + (v / n_s) * (s.sz * s.sz);
  model.jumps.push_back(std::sqrt(kappa) *
                        (s.sx - Complex(0, 1) * s.sy));
  return model;
}

SuperopSpectrum diagonalize_superop(const ComplexMatrix& superop, bool ergodic) {
  const Eigen::Index d2 = superop.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
  if (d * d != d2 || superop.cols() != d2)
    throw DimensionError("superoperator must be d^2 x d^2");

  SuperopSpectrum out;
  out.spec = eig_general(superop);
  out.dim = d;

  int null_count = 0;
  Eigen::Index null_index = -1;
  for (Eigen::Index k = 0; k < out.spec.size(); ++k) {
    if (out.spec.eigenvalues[k].real() > 1e-9)
      throw NumericalError("generator has an eigenvalue with positive real part");
    if (std::abs(out.spec.eigenvalues[k]) < 1e-9) {
      ++null_count;
      null_index = k;
    }
  }
  if (ergodic && null_count != 1)
    throw NumericalError("ergodic generator must have exactly one null mode");

  ComplexMatrix steady = unvec(out.spec.right.col(null_index), d, d);
  steady = hermitize(steady) / steady.trace().real();
  out.steady = make_density(steady, 1e-8);
  return out;
}

DensityMatrix evolve_density(const SuperopSpectrum& spec, const DensityMatrix& rho0,
                             double t) {
  if (t < 0) throw DomainError("negative evolution time");
  if (rho0.dim() != spec.dim) throw DimensionError("state/superoperator mismatch");

  ComplexVector v = vec(rho0.mat);
  ComplexVector evolved;
  if (spec.spec.biorthonormality_residual() < 1e-6) {
    ComplexVector a = spec.spec.left.adjoint() * v;
    evolved = ComplexVector::Zero(v.size());
    for (Eigen::Index k = 0; k < spec.spec.size(); ++k)
      evolved += a[k] * std::exp(spec.spec.eigenvalues[k] * t) * spec.spec.right.col(k);
  } else {
    // Eigenbasis unreliable: dense exponential of the reconstructed action.
    ComplexMatrix gen = spec.spec.right * spec.spec.eigenvalues.asDiagonal() *
                        spec.spec.left.adjoint();
    evolved = (t * gen).exp() * v;
  }
  ComplexMatrix rho = hermitize(unvec(evolved, spec.dim, spec.dim));
  rho /= rho.trace().real();
  return make_density(rho, 1e-8);
}

ComplexVector superop_overlaps(const SuperopSpectrum& spec, const DensityMatrix& rho) {
  return spec.spec.left.adjoint() * vec(rho.mat);
}

std::pair<double, double> asymptotic_qre_predictor(const SuperopSpectrum& spec,
                                                   const DensityMatrix& rho0,
                                                   const DensityMatrix& reference) {
  const ComplexVector a = superop_overlaps(spec, rho0);
  double lead = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < spec.spec.size(); ++k) {
    if (std::abs(spec.spec.eigenvalues[k]) < 1e-9) continue;
    if (std::abs(a[k]) <= 1e-10) continue;
    lead = std::max(lead, spec.spec.eigenvalues[k].real());
  }
  if (!std::isfinite(lead))
    throw NumericalError("state has no overlap with any decaying mode");

  const ComplexMatrix ref_inv = herm_matrix_function(
      reference.mat, [](double x) { return 1.0 / x; }, true);
  double prefactor = 0.0;
  for (Eigen::Index k = 0; k < spec.spec.size(); ++k) {
    if (std::abs(spec.spec.eigenvalues[k]) < 1e-9) continue;
    if (std::abs(a[k]) <= 1e-10) continue;
    if (spec.spec.eigenvalues[k].real() < lead - 1e-9) continue;
    const ComplexMatrix r = spec.right_mode(k);
    prefactor += 0.5 * std::norm(a[k]) * (r.adjoint() * ref_inv * r).trace().real();
  }
  return {2.0 * lead, prefactor};
}

DensityMatrix gibbs_state(const ComplexMatrix& h, double beta) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(h));
  RealVector w = (-beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff()))
                     .exp()
                     .matrix();
  if (beta < 0) {
    // Shift from the top instead so weights stay bounded.
    w = (-beta * (es.eigenvalues().array() - es.eigenvalues().maxCoeff())).exp().matrix();
  }
  w /= w.sum();
  ComplexMatrix rho =
      es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return make_density(rho);
}

}  // namespace mpemba::lindblad
