#include "ratos/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace ratos {

void EvolutionConfig::validate() const {
  if (!(t_end > t_start)) {
    throw std::invalid_argument("EvolutionConfig: t_end must exceed t_start");
  }
  if (record_every < 1) {
    throw std::invalid_argument("EvolutionConfig: record_every must be >= 1");
  }
  if (integrator == Integrator::Adaptive && tolerance <= 0.0) {
    throw std::invalid_argument("EvolutionConfig: adaptive tolerance must be positive");
  }
}

namespace {

// H(t) = A0 + sum_q Omega_q(t) B_q + conj(Omega_q(t)) B_q^dag, with the
// control-independent parts precomputed densely. Dimensions here are tiny
// (tens of states), where dense matvecs beat sparse rebuilds.
class HamiltonianEvaluator {
 public:
  HamiltonianEvaluator(const ModelParams& params, const ControlSchedule& schedule,
                       const SymmetricBasis& basis)
      : params_(params), schedule_(schedule) {
    const std::vector<Complex> zero(static_cast<size_t>(params.num_modes),
                                    Complex(0.0, 0.0));
    base_ = Eigen::MatrixXcd(effective_nonhermitian(params, zero, basis));
    control_parts_.reserve(static_cast<size_t>(params.num_modes));
    for (int q = 1; q <= params.num_modes; ++q) {
      control_parts_.push_back(
          -Eigen::MatrixXcd(collective_flip(basis, Level::c(), Level::a(q))));
    }
  }

  const Eigen::MatrixXcd& at(double t) {
    scratch_ = base_;
    const std::vector<Complex> controls = schedule_.evaluate(t);
    for (size_t q = 0; q < control_parts_.size(); ++q) {
      if (controls[q] != Complex(0.0, 0.0)) {
        scratch_.noalias() += controls[q] * control_parts_[q];
        scratch_.noalias() +=
            std::conj(controls[q]) * control_parts_[q].adjoint();
      }
    }
    return scratch_;
  }

  double max_rate(double t) { return at(t).cwiseAbs().rowwise().sum().maxCoeff(); }

 private:
  ModelParams params_;
  const ControlSchedule& schedule_;
  Eigen::MatrixXcd base_;
  std::vector<Eigen::MatrixXcd> control_parts_;
  Eigen::MatrixXcd scratch_;
};

Eigen::VectorXcd rk4_step(HamiltonianEvaluator& h, const Eigen::VectorXcd& psi,
                          double t, double dt) {
  const Complex minus_i(0.0, -1.0);
  const Eigen::VectorXcd k1 = minus_i * (h.at(t) * psi);
  const Eigen::VectorXcd k2 = minus_i * (h.at(t + 0.5 * dt) * (psi + 0.5 * dt * k1));
  const Eigen::VectorXcd k3 = minus_i * (h.at(t + 0.5 * dt) * (psi + 0.5 * dt * k2));
  const Eigen::VectorXcd k4 = minus_i * (h.at(t + dt) * (psi + dt * k3));
  return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Embedded Cash-Karp 4(5) pair for the adaptive integrator.
bool rk45_step(HamiltonianEvaluator& h, Eigen::VectorXcd& psi, double& t,
               double& dt, double tol, double t_end) {
  static const double a[] = {0.0, 0.2, 0.3, 0.6, 1.0, 0.875};
  static const double b2[] = {0.2};
  static const double b3[] = {3.0 / 40.0, 9.0 / 40.0};
  static const double b4[] = {0.3, -0.9, 1.2};
  static const double b5[] = {-11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0};
  static const double b6[] = {1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0,
                              44275.0 / 110592.0, 253.0 / 4096.0};
  static const double c5[] = {37.0 / 378.0,  0.0, 250.0 / 621.0,
                              125.0 / 594.0, 0.0, 512.0 / 1771.0};
  static const double c4[] = {2825.0 / 27648.0, 0.0,           18575.0 / 48384.0,
                              13525.0 / 55296.0, 277.0 / 14336.0, 0.25};
  const Complex minus_i(0.0, -1.0);
  const double step = std::min(dt, t_end - t);

  const Eigen::VectorXcd k1 = minus_i * (h.at(t) * psi);
  const Eigen::VectorXcd k2 =
      minus_i * (h.at(t + a[1] * step) * (psi + step * (b2[0] * k1)));
  const Eigen::VectorXcd k3 = minus_i * (h.at(t + a[2] * step) *
                                         (psi + step * (b3[0] * k1 + b3[1] * k2)));
  const Eigen::VectorXcd k4 =
      minus_i * (h.at(t + a[3] * step) *
                 (psi + step * (b4[0] * k1 + b4[1] * k2 + b4[2] * k3)));
  const Eigen::VectorXcd k5 =
      minus_i * (h.at(t + a[4] * step) *
                 (psi + step * (b5[0] * k1 + b5[1] * k2 + b5[2] * k3 + b5[3] * k4)));
  const Eigen::VectorXcd k6 =
      minus_i * (h.at(t + a[5] * step) *
                 (psi + step * (b6[0] * k1 + b6[1] * k2 + b6[2] * k3 +
                                b6[3] * k4 + b6[4] * k5)));

  const Eigen::VectorXcd high = psi + step * (c5[0] * k1 + c5[2] * k3 +
                                              c5[3] * k4 + c5[5] * k6);
  const Eigen::VectorXcd low = psi + step * (c4[0] * k1 + c4[2] * k3 + c4[3] * k4 +
                                             c4[4] * k5 + c4[5] * k6);
  const double err = (high - low).norm();
  const double allowed = tol * step;
  if (err <= allowed || step <= 1e-14) {
    psi = high;
    t += step;
    const double grow = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 2.0;
    dt = step * std::clamp(grow, 0.2, 2.0);
    return true;
  }
  dt = step * std::clamp(0.9 * std::pow(allowed / err, 0.25), 0.2, 1.0);
  return false;
}

}  // namespace

Trajectory evolve(const ModelParams& params, const ControlSchedule& schedule,
                  const SymmetricBasis& basis, const Eigen::VectorXcd& initial,
                  const EvolutionConfig& config) {
  params.validate();
  config.validate();
  schedule.validate();
  if (schedule.num_modes() != params.num_modes) {
    throw std::invalid_argument("evolve: schedule mode count mismatch");
  }
  if (initial.size() != basis.dimension()) {
    throw std::invalid_argument("evolve: initial state dimension mismatch");
  }
  if (std::abs(initial.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("evolve: initial state must be unit norm");
  }
  const bool lossless =
      std::all_of(params.gamma.begin(), params.gamma.end(),
                  [](double g) { return g == 0.0; });

  HamiltonianEvaluator h(params, schedule, basis);

  double dt = config.dt;
  if (dt <= 0.0) {
    const double rate = std::max(
        {h.max_rate(config.t_start), h.max_rate(0.5 * (config.t_start + config.t_end)),
         h.max_rate(config.t_end), 1.0});
    dt = 0.05 / rate;
  }

  Trajectory traj;
  auto record = [&](double t, const Eigen::VectorXcd& psi) {
    traj.times.push_back(t);
    traj.norms.push_back(psi.norm());
    std::vector<double> pops(static_cast<size_t>(params.num_modes));
    for (int q = 1; q <= params.num_modes; ++q) {
      double n_q = 0.0;
      for (int i = 0; i < basis.dimension(); ++i) {
        n_q += basis.photons(basis.state(i), q) * std::norm(psi(i));
      }
      pops[static_cast<size_t>(q - 1)] = n_q;
    }
    traj.mode_populations.push_back(std::move(pops));
    if (config.record_dark_overlap) {
      const double norm = psi.norm();
      if (norm > 1e-12) {
        const DarkState dark = dark_state(params, schedule.evaluate(t), basis,
                                          basis.spec.excitation, true);
        traj.dark_overlaps.push_back(std::norm(dark.amplitudes.dot(psi / norm)));
      } else {
        traj.dark_overlaps.push_back(0.0);
      }
    }
    if (config.record_states) traj.states.push_back(psi);
  };

  Eigen::VectorXcd psi = initial;
  double t = config.t_start;
  record(t, psi);

  auto check_norm_gate = [&](const Eigen::VectorXcd& state) {
    if (!state.allFinite()) {
      throw NumericalError("evolve: state became non-finite");
    }
    if (lossless && std::abs(state.norm() - 1.0) > 1e-6) {
      throw NumericalError(
          "evolve: norm drift exceeded 1e-6 with zero decay; reduce dt");
    }
  };

  if (config.integrator == EvolutionConfig::Integrator::FixedRk4) {
    const double span = config.t_end - config.t_start;
    const long steps = std::max(1L, std::lround(std::ceil(span / dt - 1e-12)));
    const double step = span / static_cast<double>(steps);
    for (long s = 1; s <= steps; ++s) {
      psi = rk4_step(h, psi, t, step);
      t = config.t_start + static_cast<double>(s) * step;
      check_norm_gate(psi);
      if (s % config.record_every == 0 || s == steps) record(t, psi);
    }
  } else {
    long accepted = 0;
    while (t < config.t_end - 1e-12) {
      if (rk45_step(h, psi, t, dt, config.tolerance, config.t_end)) {
        ++accepted;
        check_norm_gate(psi);
        if (accepted % config.record_every == 0 || t >= config.t_end - 1e-12) {
          record(t, psi);
        }
      }
    }
  }
  return traj;
}

TransferReport run_ratos(const ModelParams& params, const SymmetricBasis& basis,
                         int n, int mode_i, int mode_j, double omega_amplitude,
                         double fade_duration, const EvolutionConfig& config) {
  if (mode_i == mode_j) {
    throw std::invalid_argument("run_ratos: mode_i and mode_j must differ");
  }
  if (mode_i < 1 || mode_i > params.num_modes || mode_j < 1 ||
      mode_j > params.num_modes) {
    throw std::invalid_argument("run_ratos: mode index out of range");
  }
  if (omega_amplitude <= 0.0) {
    throw std::invalid_argument("run_ratos: omega_amplitude must be positive");
  }
  if (fade_duration < 0.0) {
    throw std::invalid_argument("run_ratos: fade_duration must be >= 0");
  }

  std::vector<Complex> start(static_cast<size_t>(params.num_modes), Complex(0.0));
  std::vector<Complex> target = start;
  start[static_cast<size_t>(mode_i - 1)] = Complex(omega_amplitude, 0.0);
  target[static_cast<size_t>(mode_j - 1)] = Complex(omega_amplitude, 0.0);

  const DarkState initial = dark_state(params, start, basis, n);
  const DarkState goal = dark_state(params, target, basis, n);

  TransferReport report;
  if (fade_duration == 0.0) {
    // Sudden limit: controls jump, state does not move.
    report.fidelity = std::norm(goal.amplitudes.dot(initial.amplitudes));
    report.absorbed = 0.0;
    return report;
  }

  ControlSchedule schedule(params.num_modes);
  schedule.add_cross_fade(mode_i, mode_j, 0.0, fade_duration,
                          Complex(omega_amplitude, 0.0),
                          Complex(omega_amplitude, 0.0));

  EvolutionConfig run = config;
  run.t_start = 0.0;
  run.t_end = fade_duration;

  report.trajectory = evolve(params, schedule, basis, initial.amplitudes, run);
  const Eigen::VectorXcd& final_state = report.trajectory.final_state();
  report.fidelity = std::norm(goal.amplitudes.dot(final_state));
  report.absorbed = 1.0 - final_state.squaredNorm();
  return report;
}

std::vector<SweepRow> adiabaticity_sweep(const ModelParams& params,
                                         const SymmetricBasis& basis, int n,
                                         int mode_i, int mode_j,
                                         double omega_amplitude,
                                         const std::vector<double>& fade_durations,
                                         const EvolutionConfig& config) {
  if (fade_durations.empty()) {
    throw std::invalid_argument("adiabaticity_sweep: empty fade_T list");
  }
  std::vector<SweepRow> rows;
  rows.reserve(fade_durations.size());
  for (double fade : fade_durations) {
    EvolutionConfig run = config;
    run.record_states = true;
    run.record_dark_overlap = false;
    TransferReport report =
        run_ratos(params, basis, n, mode_i, mode_j, omega_amplitude, fade, run);
    rows.push_back({fade, report.fidelity, report.absorbed});
  }
  return rows;
}

}  // namespace ratos
