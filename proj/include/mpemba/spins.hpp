#pragma once

#include "mpemba/numkit.hpp"
#include "mpemba/types.hpp"

namespace mpemba::spins {

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Spin-1/2 components s = sigma/2; |0> carries s^z = +1/2.
inline ComplexMatrix spin_half(char axis) {
  switch (axis) {
    case 'x': return 0.5 * pauli_x();
    case 'y': return 0.5 * pauli_y();
    case 'z': return 0.5 * pauli_z();
  }
  throw DomainError("unknown spin axis");
}

/// Single-site operator embedded at `site` of an n-qubit register
/// (site 0 is the most significant factor).
inline ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 0; k < n; ++k)
    out = kron(out, k == site ? op : ComplexMatrix::Identity(2, 2));
  return out;
}

/// Total spin component sum_n s^axis_n on n qubits.
inline ComplexMatrix total_spin(char axis, int n) {
  const Eigen::Index d = Eigen::Index(1) << n;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < n; ++k) out += site_operator(spin_half(axis), k, n);
  return out;
}

/// Collective spin-j ladder representation on the (2j+1)-dimensional
/// symmetric sector; basis ordered by descending magnetization m = j..-j.
struct CollectiveSpin {
  ComplexMatrix sx, sy, sz;
};

inline CollectiveSpin collective_spin(int two_j) {
  const double j = 0.5 * two_j;
  const Eigen::Index d = two_j + 1;
  ComplexMatrix sp = ComplexMatrix::Zero(d, d);
  ComplexMatrix sz = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = j - k;
    sz(k, k) = m;
    if (k > 0) {
      const double mlow = j - k;  // raising from m' = mlow to mlow+1
      sp(k - 1, k) = std::sqrt(j * (j + 1) - mlow * (mlow + 1));
    }
  }
  ComplexMatrix sm = sp.adjoint();
  CollectiveSpin s;
  s.sx = 0.5 * (sp + sm);
  s.sy = Complex(0, -0.5) * (sp - sm);
  s.sz = sz;
  return s;
}

/// Transverse-field Ising chain -J sum s^z_n s^z_{n+1} + h sum s^x_n with
/// open boundaries, written with Pauli matrices.
inline ComplexMatrix tfim_hamiltonian(int n, double coupling, double field) {
  const Eigen::Index d = Eigen::Index(1) << n;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int k = 0; k + 1 < n; ++k)
    h -= coupling * (site_operator(pauli_z(), k, n) * site_operator(pauli_z(), k + 1, n));
  for (int k = 0; k < n; ++k) h += field * site_operator(pauli_x(), k, n);
  return h;
}

}  // namespace mpemba::spins
