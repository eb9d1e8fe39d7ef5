#include "mpemba/numkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpemba {

DensityMatrix make_density(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("density matrix not square");
  if (!m.allFinite()) throw NumericalError("density matrix has non-finite entries");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw NumericalError("density matrix not Hermitian within tolerance");
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol)
    throw NumericalError("density matrix trace differs from one");
  ComplexMatrix h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw NumericalError("density matrix has a negative eigenvalue");
  return DensityMatrix{std::move(h)};
}

ProbabilityVector make_probability(const RealVector& v) {
  if (v.size() == 0) throw DimensionError("empty probability vector");
  RealVector p = v;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < -1e-14)
      throw NumericalError("probability entry negative beyond tolerance");
    if (p[i] < 0.0) p[i] = 0.0;
  }
  if (std::abs(p.sum() - 1.0) > 1e-12)
    throw NumericalError("probability vector does not sum to one");
  return ProbabilityVector{std::move(p)};
}

double GeneratorSpectrum::biorthonormality_residual() const {
  ComplexMatrix overlap = left.adjoint() * right;
  return (overlap - ComplexMatrix::Identity(size(), size())).cwiseAbs().maxCoeff();
}

double GeneratorSpectrum::reconstruction_residual(const ComplexMatrix& m) const {
  ComplexMatrix rebuilt =
      right * eigenvalues.asDiagonal() * left.adjoint();
  return (rebuilt - m).cwiseAbs().maxCoeff();
}

MonotoneTrajectory make_trajectory(RealVector times, RealVector values,
                                   std::string label) {
  if (times.size() != values.size())
    throw DimensionError("trajectory time/value length mismatch");
  for (Eigen::Index i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw NumericalError("trajectory times not strictly ascending");
  if (!values.allFinite())
    throw NumericalError("trajectory contains non-finite values");
  return MonotoneTrajectory{std::move(times), std::move(values), std::move(label)};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const long rows = static_cast<long>(a.rows()) * b.rows();
  const long cols = static_cast<long>(a.cols()) * b.cols();
  if (rows > kDimensionCap || cols > kDimensionCap)
    throw DimensionError("kron dimension exceeds dense cap");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<Eigen::Index>& dims,
                            const std::vector<Eigen::Index>& keep) {
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) total *= d;
  if (total != m.rows() || m.rows() != m.cols())
    throw DimensionError("partial_trace dims do not factor the matrix");

  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  Eigen::Index keep_dim = 1, trace_dim = 1;
  for (Eigen::Index k : keep) {
    if (k < 0 || k >= n || kept[k])
      throw DimensionError("partial_trace keep index invalid");
    kept[k] = true;
  }
  for (int f = 0; f < n; ++f) (kept[f] ? keep_dim : trace_dim) *= dims[f];

  // Strides of each factor in the row-major multi-index of the full space.
  std::vector<Eigen::Index> stride(n, 1);
  for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  std::vector<int> keep_order(keep.begin(), keep.end());
  std::vector<int> traced;
  for (int f = 0; f < n; ++f)
    if (!kept[f]) traced.push_back(f);

  auto expand = [&](Eigen::Index packed, const std::vector<int>& factors) {
    Eigen::Index idx = 0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      idx += (packed % dims[*it]) * stride[*it];
      packed /= dims[*it];
    }
    return idx;
  };

  ComplexMatrix out = ComplexMatrix::Zero(keep_dim, keep_dim);
  for (Eigen::Index i = 0; i < keep_dim; ++i) {
    const Eigen::Index bi = expand(i, keep_order);
    for (Eigen::Index j = 0; j < keep_dim; ++j) {
      const Eigen::Index bj = expand(j, keep_order);
      Complex acc(0.0, 0.0);
      for (Eigen::Index e = 0; e < trace_dim; ++e) {
        const Eigen::Index be = expand(e, traced);
        acc += m(bi + be, bj + be);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

namespace {

// Deterministic scale/phase: unit norm, largest-|entry| made real positive.
void canonicalize_column(Eigen::Ref<ComplexVector> v) {
  v.normalize();
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex z = v[imax];
  if (std::abs(z) > 0) v *= std::conj(z) / std::abs(z);
}

}  // namespace

GeneratorSpectrum eig_general(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eig_general needs square input");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed to converge");

  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  const double eps = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(ev[a].real() - ev[b].real()) > eps) return ev[a].real() > ev[b].real();
    if (std::abs(ev[a].imag() - ev[b].imag()) > eps) return ev[a].imag() > ev[b].imag();
    return a < b;
  });

  GeneratorSpectrum spec;
  spec.eigenvalues.resize(n);
  spec.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    spec.eigenvalues[k] = ev[order[k]];
    spec.right.col(k) = es.eigenvectors().col(order[k]);
    canonicalize_column(spec.right.col(k));
  }

  // Left modes from the inverse: biorthonormal by construction.
  Eigen::PartialPivLU<ComplexMatrix> lu(spec.right);
  ComplexMatrix inv = lu.inverse();
  spec.left = inv.adjoint();

  if (spec.reconstruction_residual(m) > 1e-6 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw NumericalError("matrix is defective: eigenbasis reconstruction failed");
  return spec;
}

ComplexMatrix herm_matrix_function(const ComplexMatrix& h,
                                   const std::function<double(double)>& f,
                                   bool singular) {
  if (h.rows() != h.cols()) throw DimensionError("herm_matrix_function needs square input");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw DomainError("herm_matrix_function input not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(h));
  RealVector lam = es.eigenvalues();
  const double floor = kEigenvalueFloor * std::max(1.0, lam.cwiseAbs().maxCoeff());
  RealVector mapped(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (singular && lam[i] < floor)
      throw DomainError("eigenvalue below floor for singular scalar function");
    mapped[i] = f(lam[i]);
  }
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() <= 16 && m.cols() <= 16)
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues().sum();
  return Eigen::BDCSVD<ComplexMatrix>(m).singularValues().sum();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 16 && m.cols() <= 16)
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
  return Eigen::BDCSVD<ComplexMatrix>(m).singularValues()(0);
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) throw DimensionError("unvec size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

ComplexMatrix vectorize_superop(const ComplexMatrix& left, const ComplexMatrix& right) {
  if (left.cols() != right.cols() || left.rows() != right.rows())
    throw DimensionError("vectorize_superop operand mismatch");
  // vec(L rho R^dagger) = (conj(R) otimes L) vec(rho) for column stacking.
  return kron(right.conjugate(), left);
}

ComplexMatrix conjugation_superop(const ComplexMatrix& u) {
  return vectorize_superop(u, u);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.mat, Eigen::EigenvaluesOnly);
  double s = 0.0;
  const double floor = kEigenvalueFloor * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > floor) s -= p * std::log(p);
  }
  return s;
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace mpemba
