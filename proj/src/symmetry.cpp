#include "mpemba/symmetry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpemba/monotones.hpp"
#include "mpemba/numkit.hpp"
#include "mpemba/spins.hpp"

namespace mpemba::symmetry {

namespace {

constexpr double kLabelTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;

// Orthonormal eigenbasis of a normal matrix via Schur form.
void normal_eigenbasis(const ComplexMatrix& m, ComplexMatrix& basis,
                       ComplexVector& values) {
  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  const ComplexMatrix& t = schur.matrixT();
  double off = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) off = std::max(off, std::abs(t(j, i) - (i == j ? t(i, i) : t(j, i))));
  basis = schur.matrixU();
  values = t.diagonal();
}

// Cluster sorted values within tol, returning a representative per value.
RealVector binned(const RealVector& raw, double tol) {
  std::vector<Eigen::Index> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return raw[a] < raw[b]; });
  RealVector out(raw.size());
  double rep = 0.0;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (i == 0 || raw[order[i]] - rep > tol) rep = raw[order[i]];
    out[order[i]] = rep;
  }
  return out;
}

struct AbelianBasis {
  ComplexMatrix basis;   // orthonormal columns
  RealVector labels;     // per-column charge (or energy)
  bool modular = false;  // labels live in Z_order
  int order = 0;
};

AbelianBasis abelian_basis(const GroupAction& action) {
  AbelianBasis ab;
  if (const auto* u1 = std::get_if<U1Action>(&action)) {
    ab.basis = u1->basis;
    ab.labels = u1->charges;
  } else if (const auto* zn = std::get_if<ZNAction>(&action)) {
    ab.basis = zn->basis;
    ab.labels.resize(static_cast<Eigen::Index>(zn->charges.size()));
    for (Eigen::Index i = 0; i < ab.labels.size(); ++i)
      ab.labels[i] = zn->charges[i];
    ab.modular = true;
    ab.order = zn->order;
  } else if (const auto* tt = std::get_if<TimeTranslationAction>(&action)) {
    ab.basis = tt->basis;
    ab.labels = tt->energies;
  } else {
    throw DomainError("abelian basis requested for SU(2) action");
  }
  return ab;
}

double pair_label(const AbelianBasis& ab, Eigen::Index q, Eigen::Index qp) {
  double mu = ab.labels[q] - ab.labels[qp];
  if (ab.modular) {
    mu = std::fmod(mu, ab.order);
    if (mu < -kLabelTol) mu += ab.order;
  }
  return mu;
}

std::vector<double> distinct_pair_labels(const AbelianBasis& ab) {
  const Eigen::Index d = ab.labels.size();
  std::vector<double> all;
  all.reserve(d * d);
  for (Eigen::Index q = 0; q < d; ++q)
    for (Eigen::Index qp = 0; qp < d; ++qp) all.push_back(pair_label(ab, q, qp));
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double v : all)
    if (out.empty() || v - out.back() > kLabelTol) out.push_back(v);
  return out;
}

}  // namespace

GroupAction make_u1(const ComplexMatrix& generator) {
  if ((generator - generator.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw NumericalError("U(1) generator must be Hermitian");
  U1Action a;
  a.generator = hermitize(generator);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.generator);
  a.basis = es.eigenvectors();
  a.charges = binned(es.eigenvalues(), kLabelTol);
  for (Eigen::Index i = 0; i < a.charges.size(); ++i)
    if (std::abs(2.0 * a.charges[i] - std::round(2.0 * a.charges[i])) > 1e-6)
      throw NumericalError("U(1) charges must be half-integer spaced");
  return a;
}

GroupAction make_zn(int order, const ComplexMatrix& rep) {
  if (order < 1) throw DomainError("Z_N order must be positive");
  if ((rep * rep.adjoint() - ComplexMatrix::Identity(rep.rows(), rep.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw NumericalError("Z_N representation must be unitary");
  ComplexMatrix power = ComplexMatrix::Identity(rep.rows(), rep.cols());
  for (int k = 0; k < order; ++k) power = rep * power;
  const Complex phase = power(0, 0);
  if ((power - phase * ComplexMatrix::Identity(rep.rows(), rep.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10 ||
      std::abs(std::abs(phase) - 1.0) > 1e-10)
    throw NumericalError("representation to the N-th power is not a phase");

  ZNAction a;
  a.order = order;
  a.rep = rep;
  ComplexVector values;
  normal_eigenbasis(rep, a.basis, values);
  const double phi = std::arg(phase);
  a.charges.resize(values.size());
  for (Eigen::Index q = 0; q < values.size(); ++q) {
    const double k = (order * std::arg(values[q]) - phi) / (2.0 * kPi);
    int ki = static_cast<int>(std::llround(k)) % order;
    if (ki < 0) ki += order;
    if (std::abs(k - std::llround(k)) > 1e-6)
      throw NumericalError("representation eigenphase is not an N-th root");
    a.charges[q] = ki;
  }
  return a;
}

GroupAction make_time_translation(const ComplexMatrix& hamiltonian) {
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw NumericalError("time-translation generator must be Hermitian");
  TimeTranslationAction a;
  a.hamiltonian = hermitize(hamiltonian);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.hamiltonian);
  a.basis = es.eigenvectors();
  a.energies = binned(es.eigenvalues(), kLabelTol);
  return a;
}

GroupAction make_su2(const ComplexMatrix& sx, const ComplexMatrix& sy,
                     const ComplexMatrix& sz) {
  const ComplexMatrix comm_xy = sx * sy - sy * sx - Complex(0, 1) * sz;
  const ComplexMatrix comm_yz = sy * sz - sz * sy - Complex(0, 1) * sx;
  const ComplexMatrix comm_zx = sz * sx - sx * sz - Complex(0, 1) * sy;
  const double res = std::max({comm_xy.cwiseAbs().maxCoeff(),
                               comm_yz.cwiseAbs().maxCoeff(),
                               comm_zx.cwiseAbs().maxCoeff()});
  if (res > 1e-10) throw NumericalError("spin triple violates su(2) algebra");

  SU2Action a;
  a.sx = sx;
  a.sy = sy;
  a.sz = sz;

  // Commutant = kernel of sum_a ad(S_a)^2 in the Hilbert-Schmidt sense.
  const Eigen::Index d = sx.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix quad = ComplexMatrix::Zero(d * d, d * d);
  for (const ComplexMatrix* s : {&a.sx, &a.sy, &a.sz}) {
    const ComplexMatrix ad = vectorize_superop(*s, id) - vectorize_superop(id, s->adjoint());
    quad += ad.adjoint() * ad;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(quad);
  std::vector<Eigen::Index> inv, comp;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    (es.eigenvalues()[k] < 1e-9 ? inv : comp).push_back(k);
  a.invariant_basis.resize(d * d, static_cast<Eigen::Index>(inv.size()));
  a.complement_basis.resize(d * d, static_cast<Eigen::Index>(comp.size()));
  for (size_t i = 0; i < inv.size(); ++i)
    a.invariant_basis.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(inv[i]);
  for (size_t i = 0; i < comp.size(); ++i)
    a.complement_basis.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(comp[i]);
  return a;
}

GroupAction u1_total_sz(int qubits) { return make_u1(spins::total_spin('z', qubits)); }

GroupAction su2_total_spin(int qubits) {
  return make_su2(spins::total_spin('x', qubits), spins::total_spin('y', qubits),
                  spins::total_spin('z', qubits));
}

Eigen::Index action_dim(const GroupAction& action) {
  return std::visit(
      [](const auto& a) -> Eigen::Index {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, U1Action>) return a.generator.rows();
        else if constexpr (std::is_same_v<T, ZNAction>) return a.rep.rows();
        else if constexpr (std::is_same_v<T, TimeTranslationAction>) return a.hamiltonian.rows();
        else return a.sx.rows();
      },
      action);
}

ComplexMatrix twirl(const ComplexMatrix& rho, const GroupAction& action) {
  if (rho.rows() != action_dim(action) || rho.cols() != action_dim(action))
    throw DimensionError("twirl dimension mismatch");

  if (const auto* zn = std::get_if<ZNAction>(&action)) {
    ComplexMatrix acc = ComplexMatrix::Zero(rho.rows(), rho.cols());
    ComplexMatrix u = ComplexMatrix::Identity(rho.rows(), rho.cols());
    for (int g = 0; g < zn->order; ++g) {
      acc += u * rho * u.adjoint();
      u = zn->rep * u;
    }
    return acc / static_cast<double>(zn->order);
  }
  if (const auto* su2 = std::get_if<SU2Action>(&action)) {
    const ComplexVector projected =
        su2->invariant_basis * (su2->invariant_basis.adjoint() * vec(rho));
    return unvec(projected, rho.rows(), rho.cols());
  }

  // U(1) / time translation: keep the equal-label blocks.
  const AbelianBasis ab = abelian_basis(action);
  ComplexMatrix y = ab.basis.adjoint() * rho * ab.basis;
  for (Eigen::Index q = 0; q < y.rows(); ++q)
    for (Eigen::Index qp = 0; qp < y.cols(); ++qp)
      if (std::abs(ab.labels[q] - ab.labels[qp]) > kLabelTol) y(q, qp) = 0.0;
  return ab.basis * y * ab.basis.adjoint();
}

ComplexMatrix ModeDecomposition::component(double label, double tol) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (std::abs(labels[i] - label) <= tol) return components[i];
  throw DomainError("mode label not present in decomposition");
}

double ModeDecomposition::completeness_residual(const ComplexMatrix& original) const {
  ComplexMatrix sum = ComplexMatrix::Zero(original.rows(), original.cols());
  for (const auto& c : components) sum += c;
  return (sum - original).cwiseAbs().maxCoeff();
}

ModeDecomposition mode_decompose(const ComplexMatrix& x, const GroupAction& action) {
  ModeDecomposition dec;
  if (const auto* su2 = std::get_if<SU2Action>(&action)) {
    const ComplexVector v = vec(x);
    const ComplexVector inv = su2->invariant_basis * (su2->invariant_basis.adjoint() * v);
    dec.labels = {0.0, 1.0};
    dec.components.push_back(unvec(inv, x.rows(), x.cols()));
    dec.components.push_back(unvec(ComplexVector(v - inv), x.rows(), x.cols()));
    return dec;
  }

  const AbelianBasis ab = abelian_basis(action);
  const ComplexMatrix y = ab.basis.adjoint() * x * ab.basis;
  for (double mu : distinct_pair_labels(ab)) {
    ComplexMatrix masked = ComplexMatrix::Zero(y.rows(), y.cols());
    bool hit = false;
    for (Eigen::Index q = 0; q < y.rows(); ++q)
      for (Eigen::Index qp = 0; qp < y.cols(); ++qp)
        if (std::abs(pair_label(ab, q, qp) - mu) <= kLabelTol) {
          masked(q, qp) = y(q, qp);
          hit = true;
        }
    if (!hit) continue;
    dec.labels.push_back(mu);
    dec.components.push_back(ab.basis * masked * ab.basis.adjoint());
  }
  return dec;
}

ModeOccupancy mode_occupancy(const DensityMatrix& rho, const GroupAction& action,
                             const DensityMatrix& reference) {
  const ModeDecomposition dref = mode_decompose(reference.mat, action);
  const ModeDecomposition drho = mode_decompose(rho.mat, action);
  ModeOccupancy occ;
  for (size_t i = 0; i < dref.labels.size(); ++i) {
    const double ref_norm = trace_norm(dref.components[i]);
    double rho_norm = 0.0;
    for (size_t j = 0; j < drho.labels.size(); ++j)
      if (std::abs(drho.labels[j] - dref.labels[i]) <= kLabelTol)
        rho_norm = trace_norm(drho.components[j]);
    if (ref_norm < 1e-12) {
      occ.dropped_labels.push_back(dref.labels[i]);
      continue;
    }
    occ.labels.push_back(dref.labels[i]);
    occ.values.push_back(rho_norm / ref_norm);
  }
  return occ;
}

std::vector<ComplexMatrix> sampled_group_superops(const GroupAction& action) {
  std::vector<ComplexMatrix> out;
  if (const auto* u1 = std::get_if<U1Action>(&action)) {
    for (int k = 1; k <= 16; ++k) {
      const double gamma = 4.0 * kPi * k / 16.0;
      ComplexVector phases(u1->charges.size());
      for (Eigen::Index q = 0; q < phases.size(); ++q)
        phases[q] = std::exp(Complex(0, gamma * u1->charges[q]));
      const ComplexMatrix u = u1->basis * phases.asDiagonal() * u1->basis.adjoint();
      out.push_back(conjugation_superop(u));
    }
  } else if (const auto* zn = std::get_if<ZNAction>(&action)) {
    ComplexMatrix u = ComplexMatrix::Identity(zn->rep.rows(), zn->rep.cols());
    for (int g = 1; g <= zn->order; ++g) {
      u = zn->rep * u;
      out.push_back(conjugation_superop(u));
    }
  } else if (const auto* tt = std::get_if<TimeTranslationAction>(&action)) {
    // Span the slowest resolvable Bohr period; floor keeps phases accurate.
    double wmax = 0.0;
    for (Eigen::Index a = 0; a < tt->energies.size(); ++a)
      for (Eigen::Index b = 0; b < a; ++b)
        wmax = std::max(wmax, std::abs(tt->energies[a] - tt->energies[b]));
    if (wmax == 0.0) wmax = 1.0;
    double wmin = wmax;
    for (Eigen::Index a = 0; a < tt->energies.size(); ++a)
      for (Eigen::Index b = 0; b < a; ++b) {
        const double w = std::abs(tt->energies[a] - tt->energies[b]);
        if (w > 1e-4 * wmax) wmin = std::min(wmin, w);
      }
    const double span = 2.0 * kPi / wmin;
    for (int k = 1; k <= 16; ++k) {
      const double t = span * k / 16.0;
      ComplexVector phases(tt->energies.size());
      for (Eigen::Index q = 0; q < phases.size(); ++q)
        phases[q] = std::exp(Complex(0, t * tt->energies[q]));
      const ComplexMatrix u = tt->basis * phases.asDiagonal() * tt->basis.adjoint();
      out.push_back(conjugation_superop(u));
    }
  } else {
    const auto& su2 = std::get<SU2Action>(action);
    const double golden = 0.6180339887498949;
    for (int k = 0; k < 32; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / 32.0;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = 2.0 * kPi * std::fmod(golden * k, 1.0);
      const double theta = 4.0 * kPi * std::fmod(0.7548776662466927 * (k + 1), 1.0);
      const ComplexMatrix gen =
          r * std::cos(phi) * su2.sx + r * std::sin(phi) * su2.sy + z * su2.sz;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gen);
      ComplexVector phases(es.eigenvalues().size());
      for (Eigen::Index q = 0; q < phases.size(); ++q)
        phases[q] = std::exp(Complex(0, theta * es.eigenvalues()[q]));
      const ComplexMatrix u =
          es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
      out.push_back(conjugation_superop(u));
    }
  }
  return out;
}

double covariance_check(const ComplexMatrix& channel, const GroupAction& action) {
  const Eigen::Index d = action_dim(action);
  if (channel.rows() != d * d || channel.cols() != d * d)
    throw DimensionError("channel must act on vectorized d x d operators");
  double residual = 0.0;
  for (const ComplexMatrix& ug : sampled_group_superops(action))
    residual = std::max(residual, operator_norm(channel * ug - ug * channel));
  return residual;
}

SectorSpectrum sector_spectrum(const ComplexMatrix& channel, const GroupAction& action) {
  const double res = covariance_check(channel, action);
  if (res > 1e-8)
    throw NumericalError("channel is not covariant (residual " + std::to_string(res) + ")");

  SectorSpectrum out;
  const Eigen::Index d = action_dim(action);

  auto add_sector = [&](double label, const ComplexMatrix& basis_cols) {
    if (basis_cols.cols() == 0) return;
    const ComplexMatrix block = basis_cols.adjoint() * channel * basis_cols;
    GeneratorSpectrum spec = eig_general(block);
    out.labels.push_back(label);
    out.eigenvalues.push_back(spec.eigenvalues);
    out.right.push_back(basis_cols * spec.right);
    out.left.push_back(basis_cols * spec.left);
  };

  if (const auto* su2 = std::get_if<SU2Action>(&action)) {
    add_sector(0.0, su2->invariant_basis);
    add_sector(1.0, su2->complement_basis);
    return out;
  }

  const AbelianBasis ab = abelian_basis(action);
  for (double mu : distinct_pair_labels(ab)) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> members;
    for (Eigen::Index q = 0; q < d; ++q)
      for (Eigen::Index qp = 0; qp < d; ++qp)
        if (std::abs(pair_label(ab, q, qp) - mu) <= kLabelTol) members.emplace_back(q, qp);
    ComplexMatrix basis_cols(d * d, static_cast<Eigen::Index>(members.size()));
    for (size_t i = 0; i < members.size(); ++i) {
      // vec(|v_q><v_qp|) = conj(v_qp) otimes v_q.
      const ComplexVector vq = ab.basis.col(members[i].first);
      const ComplexVector vqp = ab.basis.col(members[i].second);
      ComplexMatrix op = vq * vqp.adjoint();
      basis_cols.col(static_cast<Eigen::Index>(i)) = vec(op);
    }
    add_sector(mu, basis_cols);
  }
  return out;
}

std::vector<std::pair<double, Complex>> SectorSpectrum::flattened() const {
  std::vector<std::pair<double, Complex>> all;
  for (size_t s = 0; s < labels.size(); ++s)
    for (Eigen::Index k = 0; k < eigenvalues[s].size(); ++k)
      all.emplace_back(labels[s], eigenvalues[s][k]);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second.real() != b.second.real()) return a.second.real() > b.second.real();
    return a.second.imag() > b.second.imag();
  });
  return all;
}

double relative_entropy_asymmetry(const DensityMatrix& rho, const GroupAction& action) {
  const ComplexMatrix twirled = twirl(rho.mat, action);
  const DensityMatrix g = make_density(twirled, 1e-8);
  const double direct = monotones::quantum_relative_entropy(rho, g);
  const double via_entropy = von_neumann_entropy(g) - von_neumann_entropy(rho);
  if (std::isfinite(direct) && std::abs(direct - via_entropy) > 1e-9)
    throw NumericalError("asymmetry formulas disagree beyond tolerance");
  return std::max(via_entropy, 0.0);
}

}  // namespace mpemba::symmetry
