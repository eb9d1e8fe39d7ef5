#pragma once

#include <functional>
#include <vector>

#include "mpemba/types.hpp"

namespace mpemba {

/// Tensor product; throws DimensionError past the dense cap.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduce an operator on factors of dimensions `dims` to the factors in
/// `keep` (indices into dims, ascending output order follows `keep`).
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<Eigen::Index>& dims,
                            const std::vector<Eigen::Index>& keep);

/// Full nonsymmetric eigendecomposition with biorthonormal left modes.
/// Throws NumericalError when the reconstruction residual exceeds 1e-6
/// (defective input).
GeneratorSpectrum eig_general(const ComplexMatrix& m);

/// f applied on the eigenvalues of a Hermitian matrix. `singular` marks
/// maps undefined at 0 (log, inverse powers): eigenvalues below the
/// relative floor then raise DomainError.
ComplexMatrix herm_matrix_function(const ComplexMatrix& h,
                                   const std::function<double(double)>& f,
                                   bool singular = false);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// Operator norm (largest singular value).
double operator_norm(const ComplexMatrix& m);

/// Column-stacking vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows,
                    Eigen::Index cols);

/// d^2 x d^2 matrix of rho -> left * rho * right^dagger on column-stacked
/// operators.
ComplexMatrix vectorize_superop(const ComplexMatrix& left,
                                const ComplexMatrix& right);

/// Superoperator of the adjoint action rho -> u * rho * u^dagger.
ComplexMatrix conjugation_superop(const ComplexMatrix& u);

/// von Neumann entropy -Tr[rho ln rho] with the 0 ln 0 = 0 convention.
double von_neumann_entropy(const DensityMatrix& rho);

/// Hermitian part (m + m^dagger)/2.
ComplexMatrix hermitize(const ComplexMatrix& m);

}  // namespace mpemba
