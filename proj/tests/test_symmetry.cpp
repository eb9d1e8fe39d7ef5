#include "mpemba/symmetry.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpemba/circuits.hpp"
#include "mpemba/lindblad.hpp"
#include "mpemba/monotones.hpp"
#include "mpemba/numkit.hpp"
#include "mpemba/spins.hpp"
#include "oracles.hpp"

using namespace mpemba;
using namespace mpemba::symmetry;

namespace {

ComplexMatrix z4_shift() {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  for (int n = 0; n < 4; ++n) u((n + 1) % 4, n) = 1.0;
  return u;
}

DensityMatrix tilted_rho(double theta, int n) {
  auto psi = circuits::tilted_product_state(theta, n);
  return make_density(psi.amps * psi.amps.adjoint());
}

}  // namespace

TEST_CASE("action constructors validate their inputs") {
  CHECK_THROWS_AS((void)make_u1(ComplexMatrix::Random(3, 3)), NumericalError);
  CHECK_THROWS_AS((void)make_zn(4, 2.0 * z4_shift()), NumericalError);
  Rng rng(51);
  ComplexMatrix sx = spins::total_spin('x', 2);
  ComplexMatrix sy = spins::total_spin('y', 2);
  CHECK_THROWS_AS((void)make_su2(sx, sy, sx), NumericalError);
  CHECK_NOTHROW((void)su2_total_spin(2));
}

TEST_CASE("twirl fixes invariant states and dephases a qubit") {
  auto action = u1_total_sz(1);
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag.diagonal() << 0.7, 0.3;
  CHECK((twirl(diag, action) - diag).cwiseAbs().maxCoeff() < 1e-12);

  DensityMatrix plus = tilted_rho(1.5707963267948966, 1);
  CHECK((twirl(plus.mat, action) - 0.5 * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("twirl is an idempotent channel") {
  Rng rng(52);
  std::vector<GroupAction> actions;
  actions.push_back(u1_total_sz(2));
  actions.push_back(make_zn(4, z4_shift()));
  actions.push_back(make_time_translation(spins::tfim_hamiltonian(2, 1.0, 1.0)));
  actions.push_back(su2_total_spin(2));

  for (const auto& action : actions) {
    DensityMatrix rho = oracles::random_density(4, rng);
    ComplexMatrix once = twirl(rho.mat, action);
    CHECK(std::abs(once.trace().real() - 1.0) < 1e-10);
    CHECK((once - once.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(once, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK((twirl(once, action) - once).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("SU(2) twirl agrees with Haar sampling and lands in the commutant") {
  Rng rng(53);
  auto action = su2_total_spin(2);
  const auto& su2 = std::get<SU2Action>(action);
  DensityMatrix rho = oracles::random_density(4, rng);
  ComplexMatrix projected = twirl(rho.mat, action);

  CHECK((projected * su2.sx - su2.sx * projected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((projected * su2.sy - su2.sy * projected).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((projected * su2.sz - su2.sz * projected).cwiseAbs().maxCoeff() < 1e-10);

  // Haar average over random rotations, quaternion sampling.
  ComplexMatrix haar = ComplexMatrix::Zero(4, 4);
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    double q[4];
    double norm = 0.0;
    for (double& c : q) {
      c = rng.normal();
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (double& c : q) c /= norm;
    const double theta = 2.0 * std::atan2(
        std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]), q[0]);
    const double axis_norm =
        std::max(1e-300, std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]));
    ComplexMatrix gen = (q[1] * su2.sx + q[2] * su2.sy + q[3] * su2.sz) / axis_norm;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gen);
    ComplexVector phases(4);
    for (int i = 0; i < 4; ++i)
      phases[i] = std::exp(Complex(0, 2.0 * theta * es.eigenvalues()[i]));
    ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    haar += u * rho.mat * u.adjoint();
  }
  haar /= samples;
  CHECK((haar - projected).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("mode decomposition labels and completeness") {
  auto action = u1_total_sz(2);
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
  auto dec = mode_decompose(diag, action);
  int nonzero = 0;
  for (size_t i = 0; i < dec.labels.size(); ++i)
    if (dec.components[i].cwiseAbs().maxCoeff() > 1e-12) {
      ++nonzero;
      CHECK(dec.labels[i] == doctest::Approx(0.0));
    }
  CHECK(nonzero == 1);
  CHECK(dec.completeness_residual(diag) < 1e-12);
}

TEST_CASE("mode components transform with their characters") {
  Rng rng(54);
  std::vector<GroupAction> actions;
  actions.push_back(u1_total_sz(2));
  actions.push_back(make_zn(4, z4_shift()));
  actions.push_back(make_time_translation(spins::tfim_hamiltonian(2, 1.0, 0.7)));

  for (const auto& action : actions) {
    ComplexMatrix x = oracles::random_matrix(4, 4, rng);
    auto dec = mode_decompose(x, action);
    CHECK(dec.completeness_residual(x) < 1e-10);

    if (const auto* u1 = std::get_if<U1Action>(&action)) {
      const double gamma = 0.9;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(u1->generator);
      ComplexVector ph(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < ph.size(); ++i)
        ph[i] = std::exp(Complex(0, gamma * es.eigenvalues()[i]));
      ComplexMatrix ug = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
      for (size_t i = 0; i < dec.labels.size(); ++i) {
        ComplexMatrix rotated = ug * dec.components[i] * ug.adjoint();
        ComplexMatrix expected = std::exp(Complex(0, gamma * dec.labels[i])) * dec.components[i];
        CHECK((rotated - expected).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
    if (const auto* zn = std::get_if<ZNAction>(&action)) {
      for (size_t i = 0; i < dec.labels.size(); ++i) {
        ComplexMatrix rotated = zn->rep * dec.components[i] * zn->rep.adjoint();
        const Complex chi = std::exp(Complex(0, 2.0 * 3.14159265358979324 * dec.labels[i] / 4.0));
        CHECK((rotated - chi * dec.components[i]).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("three-qubit tilted state fills every sector at maximal tilt") {
  auto action = u1_total_sz(3);
  DensityMatrix rho = tilted_rho(1.5707963267948966, 3);
  auto dec = mode_decompose(rho.mat, action);
  int filled = 0;
  for (size_t i = 0; i < dec.labels.size(); ++i)
    if (trace_norm(dec.components[i]) > 1e-10) ++filled;
  CHECK(filled == 7);  // mu = -3..3
}

TEST_CASE("z4 modes of diagonal embeddings match the classical Fourier modes") {
  auto action = make_zn(4, z4_shift());
  RealVector p(4);
  p << 0.5, 0.25, 0.0, 0.25;
  ComplexMatrix diag = p.cast<Complex>().asDiagonal();
  auto dec = mode_decompose(diag, action);

  // Fourier coefficients of p: c_mu = T^mu^dag p.
  std::vector<double> expected_norms;
  const Complex im(0, 1);
  for (int mu = 0; mu < 4; ++mu) {
    Complex c = 0.0;
    for (int n = 0; n < 4; ++n) c += 0.5 * std::conj(std::pow(im, n * mu)) * p[n];
    expected_norms.push_back(std::abs(c));
  }
  std::sort(expected_norms.begin(), expected_norms.end());

  std::vector<double> got;
  for (const auto& comp : dec.components) {
    CHECK((comp - ComplexMatrix(comp.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <
          1e-12);
    got.push_back(comp.norm());
  }
  std::sort(got.begin(), got.end());
  REQUIRE(got.size() == expected_norms.size());
  for (size_t i = 0; i < got.size(); ++i)
    CHECK(got[i] == doctest::Approx(expected_norms[i]).epsilon(1e-9));
}

TEST_CASE("mode occupancy across the tilt family") {
  auto action = u1_total_sz(3);
  DensityMatrix reference = tilted_rho(1.5707963267948966, 3);

  auto zero = mode_occupancy(tilted_rho(0.0, 3), action, reference);
  for (size_t i = 0; i < zero.labels.size(); ++i)
    if (std::abs(zero.labels[i]) > 0.5) CHECK(zero.values[i] < 1e-12);

  auto self = mode_occupancy(reference, action, reference);
  for (double v : self.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

  auto partial = mode_occupancy(tilted_rho(0.78539816339744831, 3), action, reference);
  for (size_t i = 0; i < partial.labels.size(); ++i)
    if (std::abs(std::abs(partial.labels[i]) - 1.0) < 0.1) {
      CHECK(partial.values[i] > 0.0);
      CHECK(partial.values[i] < 1.0);
    }
}

TEST_CASE("covariance check on identity, Davies, and broken channels") {
  auto action = make_time_translation(spins::tfim_hamiltonian(2, 1.0, 1.0));
  CHECK(covariance_check(ComplexMatrix::Identity(16, 16), action) < 1e-12);

  auto model = lindblad::davies_generator(spins::tfim_hamiltonian(2, 1.0, 1.0), 0.5);
  ComplexMatrix gen = lindblad::build_lindbladian(model);
  ComplexMatrix channel = (0.7 * gen).exp();
  CHECK(covariance_check(channel, action) < 1e-9);

  // A generic unitary kicks the channel out of covariance.
  Rng rng(55);
  ComplexMatrix u = oracles::random_unitary(4, rng);
  ComplexMatrix broken = conjugation_superop(u) * channel;
  CHECK(covariance_check(broken, action) > 1e-3);
}

TEST_CASE("sector spectrum of the quantum z4 ring") {
  auto model = lindblad::z4_quantum_model(1.0, 0.25);
  ComplexMatrix gen = lindblad::build_lindbladian(model);
  auto action = make_zn(4, z4_shift());
  auto sectors = sector_spectrum(gen, action);

  REQUIRE(sectors.labels.size() == 4);
  for (const auto& ev : sectors.eigenvalues) CHECK(ev.size() == 4);

  // The null mode sits in the mu = 0 sector.
  bool zero_found = false;
  for (size_t s = 0; s < sectors.labels.size(); ++s)
    for (Eigen::Index k = 0; k < sectors.eigenvalues[s].size(); ++k)
      if (std::abs(sectors.eigenvalues[s][k]) < 1e-9) {
        zero_found = true;
        CHECK(sectors.labels[s] == doctest::Approx(0.0));
      }
  CHECK(zero_found);

  // Union of sector spectra equals the full spectrum.
  GeneratorSpectrum full = eig_general(gen);
  auto flattened = sectors.flattened();
  REQUIRE(static_cast<Eigen::Index>(flattened.size()) == full.size());
  for (Eigen::Index k = 0; k < full.size(); ++k)
    CHECK(std::abs(flattened[k].second - full.eigenvalues[k]) < 1e-8);
}

TEST_CASE("sector spectrum refuses a non-covariant channel") {
  Rng rng(56);
  ComplexMatrix junk = oracles::random_matrix(16, 16, rng);
  auto action = make_zn(4, z4_shift());
  CHECK_THROWS_AS((void)sector_spectrum(junk, action), NumericalError);
}

TEST_CASE("relative entropy of asymmetry") {
  auto action = u1_total_sz(1);
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag.diagonal() << 0.7, 0.3;
  CHECK(relative_entropy_asymmetry(make_density(diag), action) ==
        doctest::Approx(0.0).epsilon(1e-12));

  DensityMatrix plus = tilted_rho(1.5707963267948966, 1);
  CHECK(relative_entropy_asymmetry(plus, action) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));

  auto action3 = u1_total_sz(3);
  const double low = relative_entropy_asymmetry(tilted_rho(0.0, 3), action3);
  const double mid = relative_entropy_asymmetry(tilted_rho(0.78539816339744831, 3), action3);
  const double high = relative_entropy_asymmetry(tilted_rho(1.5707963267948966, 3), action3);
  CHECK(low < mid);
  CHECK(mid < high);
}

TEST_CASE("modes contract individually under a covariant channel") {
  const ComplexMatrix h = spins::tfim_hamiltonian(2, 1.0, 1.0);
  auto action = make_time_translation(h);
  auto model = lindblad::davies_generator(h, 0.5);
  ComplexMatrix channel = (0.4 * lindblad::build_lindbladian(model)).exp();
  REQUIRE(covariance_check(channel, action) < 1e-8);

  Rng rng(57);
  DensityMatrix rho = oracles::random_density(4, rng);
  auto before = mode_decompose(rho.mat, action);
  ComplexMatrix evolved = unvec(channel * vec(rho.mat), 4, 4);
  auto after = mode_decompose(evolved, action);

  for (size_t i = 0; i < before.labels.size(); ++i) {
    double after_norm = 0.0;
    for (size_t j = 0; j < after.labels.size(); ++j)
      if (std::abs(after.labels[j] - before.labels[i]) < 1e-9)
        after_norm = trace_norm(after.components[j]);
    CHECK(after_norm <= trace_norm(before.components[i]) + 1e-9);
  }
}

TEST_CASE("asymmetry decreases along a covariant evolution") {
  auto model = lindblad::z4_quantum_model(1.0, 0.25);
  auto spec = lindblad::diagonalize_superop(lindblad::build_lindbladian(model));
  auto action = make_zn(4, z4_shift());

  ComplexVector psi(4);
  psi << std::sqrt(0.5), std::sqrt(0.3), 0, std::sqrt(0.2);
  DensityMatrix rho0{psi * psi.adjoint()};

  double previous = relative_entropy_asymmetry(rho0, action);
  for (int k = 1; k <= 60; ++k) {
    auto rho = lindblad::evolve_density(spec, rho0, 0.05 * k);
    const double value = relative_entropy_asymmetry(rho, action);
    CHECK(value <= previous + 1e-9);
    previous = value;
  }
}
