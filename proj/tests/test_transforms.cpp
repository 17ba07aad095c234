#include <doctest.h>

#include <random>

#include "ratos/transforms.hpp"

using namespace ratos;

namespace {

ModelParams make_params(std::vector<Complex> g) {
  ModelParams params;
  params.num_modes = static_cast<int>(g.size());
  params.num_atoms = 1;
  params.g = std::move(g);
  params.gamma.assign(static_cast<size_t>(params.num_modes), 0.0);
  return params;
}

std::vector<Complex> random_controls(int q, std::mt19937_64& rng,
                                     double lo = 0.1, double hi = 3.0) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  std::vector<Complex> controls;
  for (int i = 0; i < q; ++i) controls.push_back(std::polar(mag(rng), phase(rng)));
  return controls;
}

std::vector<Complex> random_couplings(int q, std::mt19937_64& rng) {
  return random_controls(q, rng, 0.5, 2.0);
}

double unitarity_error(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u -
          Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("single-mode transform is a pure phase with no dark states") {
  const ModelParams params = make_params({Complex(1.0, 0.0)});
  const std::vector<Complex> controls{Complex(2.0, 0.0)};
  const BrightDarkBasis basis = atomic_transform(params, controls);
  CHECK(basis.omega_total == doctest::Approx(2.0));
  CHECK(std::abs(basis.u(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(basis.ed_coeffs.rows() == 0);
}

TEST_CASE("balanced two-mode transform reproduces the textbook bright/dark pair") {
  const ModelParams params = make_params({Complex(1.0, 0.0), Complex(1.0, 0.0)});
  const std::vector<Complex> controls{Complex(1.0, 0.0), Complex(1.0, 0.0)};
  const BrightDarkBasis basis = atomic_transform(params, controls);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(basis.eb_coeffs(0) - inv_sqrt2) < 1e-14);
  CHECK(std::abs(basis.eb_coeffs(1) - inv_sqrt2) < 1e-14);
  // |ED_1> = (|A_2> - |A_1>)/sqrt(2)
  CHECK(std::abs(basis.ed_coeffs(0, 0) + inv_sqrt2) < 1e-14);
  CHECK(std::abs(basis.ed_coeffs(0, 1) - inv_sqrt2) < 1e-14);
}

TEST_CASE("three equal controls give a unitary with orthogonal dark rows") {
  const ModelParams params =
      make_params({Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0)});
  const std::vector<Complex> controls{Complex(1.0, 0.0), Complex(1.0, 0.0),
                                      Complex(1.0, 0.0)};
  const BrightDarkBasis basis = atomic_transform(params, controls);
  CHECK(unitarity_error(basis.u) < 1e-12);
  for (int r = 0; r < 2; ++r) {
    Complex overlap(0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
      overlap += std::conj(basis.ed_coeffs(r, i)) * basis.eb_coeffs(i);
    }
    CHECK(std::abs(overlap) < 1e-12);
  }
}

TEST_CASE("all-zero controls leave the bright basis undefined") {
  const ModelParams params = make_params({Complex(1.0, 0.0), Complex(1.0, 0.0)});
  const std::vector<Complex> zero{Complex(0.0, 0.0), Complex(0.0, 0.0)};
  CHECK_THROWS_AS(atomic_transform(params, zero), std::invalid_argument);
  CHECK_THROWS_AS(optical_transform(params, zero), std::invalid_argument);
}

TEST_CASE("excited dark states carry no classical coupling") {
  std::mt19937_64 rng(5);
  for (int q = 2; q <= 4; ++q) {
    for (int trial = 0; trial < 25; ++trial) {
      const ModelParams params = make_params(random_couplings(q, rng));
      const std::vector<Complex> controls = random_controls(q, rng);
      const BrightDarkBasis basis = atomic_transform(params, controls);
      CHECK(unitarity_error(basis.u) < 1e-12);
      for (int r = 0; r < q - 1; ++r) {
        Complex coupling(0.0, 0.0);
        for (int i = 0; i < q; ++i) {
          coupling += controls[static_cast<size_t>(i)] *
                      std::conj(basis.ed_coeffs(r, i));
        }
        CHECK(std::abs(coupling) < 1e-12);
      }
    }
  }
}

TEST_CASE("pivot handling keeps the transform stable near sigma = 0") {
  // Omega_Q/Omega close to -1 breaks the naive pivot.
  const ModelParams params = make_params({Complex(1.0, 0.0), Complex(1.0, 0.0)});
  const std::vector<Complex> controls{Complex(1e-4, 0.0), Complex(-5.0, 1e-7)};
  const BrightDarkBasis basis = atomic_transform(params, controls);
  CHECK(unitarity_error(basis.u) < 1e-12);
  const Eigen::VectorXcd eb = basis.u.col(1);
  CHECK(std::abs(eb(1) - controls[1] / basis.omega_total) < 1e-12);

  // Both components near -1/sqrt(2): even the best pivot is small; the
  // re-phased fallback must keep full precision.
  const std::vector<Complex> adversarial{Complex(-3.0, 1e-9), Complex(-3.0, -1e-9)};
  const BrightDarkBasis fallback = atomic_transform(params, adversarial);
  CHECK(unitarity_error(fallback.u) < 1e-12);
  CHECK(std::abs(fallback.u(0, 1) - adversarial[0] / fallback.omega_total) < 1e-12);
}

TEST_CASE("optical transform: balanced ratios give the beam-splitter pair") {
  const ModelParams params = make_params({Complex(1.0, 0.0), Complex(1.0, 0.0)});
  const std::vector<Complex> controls{Complex(2.0, 0.0), Complex(2.0, 0.0)};
  const OpticalBasis optical = optical_transform(params, controls);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(optical.bq_coeffs(0) - inv_sqrt2) < 1e-14);
  CHECK(std::abs(optical.bq_coeffs(1) - inv_sqrt2) < 1e-14);
  // b_1 = (a_2 - a_1)/sqrt(2): first column of W up to the stated sign.
  CHECK(std::abs(optical.w(0, 0) + inv_sqrt2) < 1e-14);
  CHECK(std::abs(optical.w(1, 0) - inv_sqrt2) < 1e-14);
}

TEST_CASE("single active control collapses b_Q onto that mode") {
  const ModelParams params = make_params({Complex(0.0, 1.3), Complex(0.7, 0.0)});
  const std::vector<Complex> controls{Complex(0.0, 0.0), Complex(2.5, 0.0)};
  const OpticalBasis optical = optical_transform(params, controls);
  CHECK(std::abs(optical.bq_coeffs(0)) < 1e-14);
  CHECK(std::abs(std::abs(optical.bq_coeffs(1)) - 1.0) < 1e-14);
  CHECK(std::abs(optical.g_eff) == doctest::Approx(std::abs(params.g[1])));
}

TEST_CASE("unequal couplings weight the EIT mode by Omega_q/g_q") {
  const ModelParams params = make_params({Complex(1.0, 0.0), Complex(2.0, 0.0)});
  const std::vector<Complex> controls{Complex(1.0, 0.0), Complex(1.0, 0.0)};
  const OpticalBasis optical = optical_transform(params, controls);
  const double r_expected = std::sqrt(1.0 + 0.25);
  CHECK(optical.r_norm == doctest::Approx(r_expected));
  CHECK(std::abs(optical.bq_coeffs(0) - 2.0 / std::sqrt(5.0)) < 1e-12);
  CHECK(std::abs(optical.bq_coeffs(1) - 1.0 / std::sqrt(5.0)) < 1e-12);
  CHECK(std::abs(optical.g_eff - std::sqrt(2.0) / r_expected) < 1e-12);
}

TEST_CASE("W column Q satisfies the dark-state decoupling identity") {
  // sum_q g_q <ED_r|A_q> W_qQ = 0 for every r < Q.
  std::mt19937_64 rng(17);
  for (int q = 2; q <= 4; ++q) {
    for (int trial = 0; trial < 25; ++trial) {
      const ModelParams params = make_params(random_couplings(q, rng));
      const std::vector<Complex> controls = random_controls(q, rng);
      const BrightDarkBasis atomic = atomic_transform(params, controls);
      const OpticalBasis optical = optical_transform(params, controls);
      CHECK(unitarity_error(optical.w) < 1e-12);
      for (int r = 0; r < q - 1; ++r) {
        Complex sum(0.0, 0.0);
        for (int i = 0; i < q; ++i) {
          sum += params.g[static_cast<size_t>(i)] *
                 std::conj(atomic.ed_coeffs(r, i)) * optical.w(i, q - 1);
        }
        CHECK(std::abs(sum) < 1e-12);
      }
    }
  }
}

TEST_CASE("common control phase only rotates the EIT-mode coefficients") {
  std::mt19937_64 rng(29);
  const ModelParams params = make_params(random_couplings(3, rng));
  const std::vector<Complex> controls = random_controls(3, rng);
  const Complex phase = std::polar(1.0, 1.234);
  std::vector<Complex> rotated = controls;
  for (Complex& c : rotated) c *= phase;

  const BrightDarkBasis atomic0 = atomic_transform(params, controls);
  const BrightDarkBasis atomic1 = atomic_transform(params, rotated);
  const OpticalBasis optical0 = optical_transform(params, controls);
  const OpticalBasis optical1 = optical_transform(params, rotated);

  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(std::abs(atomic1.eb_coeffs(i)) - std::abs(atomic0.eb_coeffs(i))) <
          1e-12);
    CHECK(std::abs(optical1.bq_coeffs(i) - optical0.bq_coeffs(i) * std::conj(phase)) <
          1e-12);
  }
  CHECK(optical1.r_norm == doctest::Approx(optical0.r_norm));
}

TEST_CASE("transformed Hamiltonian exhibits the reduced-Lambda block") {
  std::mt19937_64 rng(41);
  for (int q = 2; q <= 3; ++q) {
    const ModelParams base = make_params(random_couplings(q, rng));
    ModelParams params = base;
    params.delta = 0.8;
    params.Delta = -0.3;
    const std::vector<Complex> controls = random_controls(q, rng);
    const SymmetricBasis basis = enumerate_sector({1, q, 1, {}});
    const Eigen::MatrixXcd h(transformed_hamiltonian(params, controls, basis));

    const BrightDarkBasis atomic = atomic_transform(params, controls);
    const OpticalBasis optical = optical_transform(params, controls);

    Occupation photon(static_cast<size_t>(1 + 2 * q), 0);
    photon[static_cast<size_t>(2 * q)] = 1;
    Occupation eb(static_cast<size_t>(1 + 2 * q), 0);
    eb[static_cast<size_t>(q)] = 1;
    Occupation ground(static_cast<size_t>(1 + 2 * q), 0);
    ground[0] = 1;
    const int i_ph = *basis.find(photon);
    const int i_eb = *basis.find(eb);
    const int i_c = *basis.find(ground);

    CHECK(std::abs(h(i_eb, i_ph) - Complex(-std::abs(optical.g_eff), 0.0)) < 1e-12);
    CHECK(std::abs(h(i_eb, i_c) - Complex(-atomic.omega_total, 0.0)) < 1e-12);
    CHECK(std::abs(h(i_ph, i_ph) - Complex(-0.5 * params.delta, 0.0)) < 1e-12);
    CHECK(std::abs(h(i_c, i_c) - Complex(-0.5 * params.Delta, 0.0)) < 1e-12);
    CHECK(std::abs(h(i_ph, i_c)) < 1e-12);

    // Forbidden couplings vanish.
    const StructureReport report =
        structure_report(transformed_hamiltonian(params, controls, basis), basis);
    CHECK(report.passes());
  }
}

TEST_CASE("structure report is clean for random draws and trivial for Q=1") {
  std::mt19937_64 rng(53);
  {
    const ModelParams params = make_params({Complex(1.0, 0.0)});
    const SymmetricBasis basis = enumerate_sector({2, 1, 2, {}});
    const std::vector<Complex> controls{Complex(1.5, 0.5)};
    const StructureReport report =
        structure_report(transformed_hamiltonian(params, controls, basis), basis);
    CHECK(report.max_forbidden() == 0.0);
  }
  for (int q = 2; q <= 3; ++q) {
    ModelParams params = make_params(random_couplings(q, rng));
    params.num_atoms = 2;
    params.delta = -0.4;
    params.Delta = 0.9;
    const std::vector<Complex> controls = random_controls(q, rng);
    const SymmetricBasis basis = enumerate_sector({2, q, 2, {}});
    const SparseOperator h = transformed_hamiltonian(params, controls, basis);
    const StructureReport report = structure_report(h, basis);
    CHECK(report.max_ed_classical <= 1e-10);
    CHECK(report.max_bq_ed <= 1e-10);

    // The conjugation is exactly unitary: eigenvalue spectra must agree.
    const Eigen::MatrixXcd original(build_full_hamiltonian(params, controls, basis));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig0(original);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig1(Eigen::MatrixXcd(h));
    CHECK((eig0.eigenvalues() - eig1.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sector unitary built from the transforms is unitary") {
  std::mt19937_64 rng(67);
  const ModelParams params = make_params(random_couplings(2, rng));
  const std::vector<Complex> controls = random_controls(2, rng);
  const SymmetricBasis basis = enumerate_sector({2, 2, 2, {}});
  const BrightDarkBasis atomic = atomic_transform(params, controls);
  const OpticalBasis optical = optical_transform(params, controls);
  const Eigen::MatrixXcd t = sector_unitary(basis, atomic.u, optical.w);
  CHECK(unitarity_error(t) < 1e-12);
}
