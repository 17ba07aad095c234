#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "ratos/darkstates.hpp"
#include "ratos/model.hpp"

using namespace ratos;

namespace {

ModelParams two_mode_params(Complex g1 = {1.0, 0.0}, Complex g2 = {1.0, 0.0}) {
  ModelParams params;
  params.num_modes = 2;
  params.num_atoms = 1;
  params.g = {g1, g2};
  params.gamma = {0.0, 0.0};
  return params;
}

}  // namespace

TEST_CASE("interaction Hamiltonian couplings for N=1 Q=2 n=1") {
  const ModelParams params = two_mode_params({0.7, 0.0}, {1.3, 0.0});
  const std::vector<Complex> controls{{0.4, 0.0}, {0.9, 0.0}};
  const SymmetricBasis basis = enumerate_sector({1, 2, 1, {}});
  const Eigen::MatrixXcd h(build_interaction_hamiltonian(params, controls, basis));

  const int b_photon1 = *basis.find({0, 0, 0, 1, 0});
  const int b_photon2 = *basis.find({0, 0, 0, 0, 1});
  const int c_state = *basis.find({1, 0, 0, 0, 0});
  const int a1 = *basis.find({0, 1, 0, 0, 0});
  const int a2 = *basis.find({0, 0, 1, 0, 0});

  CHECK(h(a1, b_photon1) == Complex(-0.7, 0.0));
  CHECK(h(a2, b_photon2) == Complex(-1.3, 0.0));
  CHECK(h(a1, c_state) == Complex(-0.4, 0.0));
  CHECK(h(a2, c_state) == Complex(-0.9, 0.0));
  CHECK(h(a1, b_photon2) == Complex(0.0, 0.0));
  // Hermitian partners and nothing else.
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.cwiseAbs().sum() == doctest::Approx(2 * (0.7 + 1.3 + 0.4 + 0.9)));
}

TEST_CASE("no controls and no photons gives a free ground sector") {
  // n-excitation sector spanned by |C^k> states only: with zero photons the
  // only tuple is k = n, and every Hamiltonian term needs an excited flip.
  ModelParams params = two_mode_params();
  params.num_atoms = 3;
  const std::vector<Complex> controls{{0.0, 0.0}, {0.0, 0.0}};
  const SymmetricBasis basis = enumerate_sector({3, 2, 2, {0, 0}});
  const Eigen::MatrixXcd h(build_interaction_hamiltonian(params, controls, basis));
  CHECK(h.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interaction Hamiltonian annihilates the dark state") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(0.3, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  ModelParams params;
  params.num_modes = 2;
  params.num_atoms = 3;
  params.gamma = {0.0, 0.0};
  params.g = {std::polar(mag(rng), phase(rng)), std::polar(mag(rng), phase(rng))};
  const std::vector<Complex> controls{std::polar(mag(rng), phase(rng)),
                                      std::polar(mag(rng), phase(rng))};
  const SymmetricBasis basis = enumerate_sector({3, 2, 2, {}});
  const DarkState dark = dark_state(params, controls, basis, 2);
  const SparseOperator h = build_interaction_hamiltonian(params, controls, basis);
  CHECK((h * dark.amplitudes).norm() < 1e-12);
}

TEST_CASE("detuning diagonal reads off the single-atom values") {
  ModelParams params;
  params.num_modes = 1;
  params.num_atoms = 1;
  params.g = {Complex(1.0, 0.0)};
  params.gamma = {0.0};
  params.delta = 2.0;
  params.Delta = 0.0;
  const std::vector<Complex> controls{{0.5, 0.0}};
  const SymmetricBasis basis = enumerate_sector({1, 1, 1, {}});
  const Eigen::MatrixXcd h(build_full_hamiltonian(params, controls, basis));
  const int b_photon = *basis.find({0, 0, 1});
  const int a1 = *basis.find({0, 1, 0});
  const int c_state = *basis.find({1, 0, 0});
  CHECK(h(b_photon, b_photon) == Complex(-1.0, 0.0));  // -delta/2
  CHECK(h(a1, a1) == Complex(0.0, 0.0));
  CHECK(h(c_state, c_state) == Complex(0.0, 0.0));     // -Delta/2 with Delta=0
}

TEST_CASE("zero detunings reduce the full Hamiltonian to the interaction part") {
  ModelParams params = two_mode_params();
  params.num_atoms = 2;
  const std::vector<Complex> controls{{0.3, 0.1}, {0.2, -0.4}};
  const SymmetricBasis basis = enumerate_sector({2, 2, 2, {}});
  const Eigen::MatrixXcd h_int(build_interaction_hamiltonian(params, controls, basis));
  const Eigen::MatrixXcd h_full(build_full_hamiltonian(params, controls, basis));
  CHECK((h_int - h_full).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full Hamiltonian stays Hermitian for any real detunings") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uniform(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    ModelParams params = two_mode_params();
    params.num_atoms = 2;
    params.delta = uniform(rng);
    params.Delta = uniform(rng);
    const std::vector<Complex> controls{{uniform(rng), uniform(rng)},
                                        {uniform(rng), uniform(rng)}};
    const SymmetricBasis basis = enumerate_sector({2, 2, 1, {}});
    const Eigen::MatrixXcd h(build_full_hamiltonian(params, controls, basis));
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("conjugating all couplings transposes the Hamiltonian") {
  ModelParams params = two_mode_params({0.7, 0.4}, {1.1, -0.6});
  params.num_atoms = 2;
  const std::vector<Complex> controls{{0.3, 0.8}, {-0.5, 0.2}};
  ModelParams conj_params = params;
  for (Complex& g : conj_params.g) g = std::conj(g);
  std::vector<Complex> conj_controls = controls;
  for (Complex& c : conj_controls) c = std::conj(c);

  const SymmetricBasis basis = enumerate_sector({2, 2, 2, {}});
  const Eigen::MatrixXcd h(build_interaction_hamiltonian(params, controls, basis));
  const Eigen::MatrixXcd h_conj(
      build_interaction_hamiltonian(conj_params, conj_controls, basis));
  CHECK((h_conj - h.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("excitation number commutes with the full Hamiltonian") {
  // N_exc = sum_q n_q + N_C + N_A as a diagonal on the sector; within one
  // sector it is n * identity, so conservation shows up as block structure:
  // the Hamiltonian never maps outside the sector, which the construction
  // guarantees by indexing. Verify against the full product space instead.
  ModelParams params = two_mode_params({0.9, 0.2}, {0.8, -0.1});
  params.num_atoms = 2;
  const std::vector<Complex> controls{{0.6, 0.0}, {0.0, 0.7}};
  oracle::ProductSpace space{2, 2, {2, 2}};
  const Eigen::MatrixXcd h =
      oracle::full_hamiltonian_full(params, controls, space);
  Eigen::MatrixXcd number = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (long a = 0; a < space.atomic_dim(); ++a) {
    const auto digits = space.digits_of(a);
    for (long p = 0; p < space.photon_dim(); ++p) {
      const auto photons = space.photons_of(p);
      double count = 0;
      for (int d : digits) count += (d >= 1) ? 1.0 : 0.0;
      for (int n : photons) count += n;
      number(a * space.photon_dim() + p, a * space.photon_dim() + p) = count;
    }
  }
  CHECK((h * number - number * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sector Hamiltonian matches the symmetrized product-space matrix") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> mag(0.3, 1.5);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  for (int n_atoms = 1; n_atoms <= 3; ++n_atoms) {
    ModelParams params;
    params.num_modes = 2;
    params.num_atoms = n_atoms;
    params.gamma = {0.0, 0.0};
    params.g = {std::polar(mag(rng), phase(rng)), std::polar(mag(rng), phase(rng))};
    params.delta = 0.4;
    params.Delta = -0.7;
    const std::vector<Complex> controls{std::polar(mag(rng), phase(rng)),
                                        std::polar(mag(rng), phase(rng))};
    const int n = 2;
    const SymmetricBasis basis = enumerate_sector({n_atoms, 2, n, {}});
    oracle::ProductSpace space{n_atoms, 2, {n, n}};
    const Eigen::MatrixXcd v = oracle::symmetrizer(space, basis);
    const Eigen::MatrixXcd projected =
        v.adjoint() * oracle::full_hamiltonian_full(params, controls, space) * v;
    const Eigen::MatrixXcd sector(build_full_hamiltonian(params, controls, basis));
    CHECK((projected - sector).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("non-Hermitian part rejects negative decay and stacks the A populations") {
  ModelParams params = two_mode_params();
  params.gamma = {0.5, 1.5};
  const std::vector<Complex> controls{{0.2, 0.0}, {0.3, 0.0}};
  const SymmetricBasis basis = enumerate_sector({1, 2, 1, {}});
  const Eigen::MatrixXcd h(effective_nonhermitian(params, controls, basis));
  const int a1 = *basis.find({0, 1, 0, 0, 0});
  const int a2 = *basis.find({0, 0, 1, 0, 0});
  CHECK(h(a1, a1) == Complex(0.0, -0.25));
  CHECK(h(a2, a2) == Complex(0.0, -0.75));

  params.gamma = {-0.1, 0.0};
  CHECK_THROWS_AS(effective_nonhermitian(params, controls, basis),
                  std::invalid_argument);
}

TEST_CASE("gamma all zero leaves the Hamiltonian Hermitian") {
  ModelParams params = two_mode_params();
  const std::vector<Complex> controls{{0.2, 0.1}, {0.3, -0.2}};
  const SymmetricBasis basis = enumerate_sector({1, 2, 1, {}});
  const Eigen::MatrixXcd h(effective_nonhermitian(params, controls, basis));
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("control schedule evaluates ramps and holds values in gaps") {
  ControlSchedule schedule(2);
  schedule.add_constant(1, 0.0, 1.0, Complex(2.0, 0.0));
  schedule.add_ramp_off(1, 1.0, 3.0, Complex(2.0, 0.0));
  schedule.add_ramp_on(2, 5.0, 7.0, Complex(1.0, 1.0));
  schedule.validate();

  CHECK(schedule.evaluate(1, -5.0) == Complex(2.0, 0.0));  // before: start value
  CHECK(schedule.evaluate(1, 0.5) == Complex(2.0, 0.0));
  CHECK(std::abs(schedule.evaluate(1, 2.0) - 2.0 * std::cos(M_PI / 4)) < 1e-12);
  CHECK(schedule.evaluate(1, 10.0) == Complex(0.0, 0.0));  // held after ramp-off
  CHECK(schedule.evaluate(2, 4.0) == Complex(0.0, 0.0));   // before ramp-on
  CHECK(schedule.evaluate(2, 100.0) == Complex(1.0, 1.0));
}

TEST_CASE("cross-fade keeps the control norm constant for equal couplings") {
  ControlSchedule schedule(2);
  schedule.add_constant(1, 0.0, 2.0, Complex(3.0, 0.0));
  schedule.add_cross_fade(1, 2, 2.0, 4.0, Complex(3.0, 0.0), Complex(3.0, 0.0));
  schedule.validate();
  for (double t = 2.0; t <= 6.0; t += 0.25) {
    const auto controls = schedule.evaluate(t);
    const double norm_sq = std::norm(controls[0]) + std::norm(controls[1]);
    CHECK(norm_sq == doctest::Approx(9.0).epsilon(1e-12));
  }
  // Continuity at the fade edges.
  CHECK(std::abs(schedule.evaluate(1, 2.0) - Complex(3.0, 0.0)) < 1e-12);
  CHECK(std::abs(schedule.evaluate(1, 6.0)) < 1e-12);
}

TEST_CASE("discontinuous schedules fail validation") {
  ControlSchedule schedule(1);
  schedule.add_constant(1, 0.0, 1.0, Complex(1.0, 0.0));
  schedule.add_constant(1, 2.0, 3.0, Complex(5.0, 0.0));
  CHECK_THROWS_AS(schedule.validate(), std::invalid_argument);
}

TEST_CASE("model parameter validation") {
  ModelParams params;
  params.num_modes = 2;
  params.num_atoms = 1;
  params.g = {Complex(1.0, 0.0)};
  params.gamma = {0.0, 0.0};
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);  // g size
  params.g = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);  // zero |g|
}
