#include "ratos/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ratos/config.hpp"
#include "ratos/csv.hpp"
#include "ratos/darkstates.hpp"
#include "ratos/dynamics.hpp"
#include "ratos/linoptics.hpp"
#include "ratos/scenarios.hpp"
#include "ratos/transforms.hpp"

namespace ratos {

namespace {

struct RunContext {
  ScenarioConfig config;
  std::string out_prefix;
  std::string subcommand;
  std::ostringstream summary;

  CsvWriter open_csv(const std::string& name,
                     const std::vector<std::string>& columns) {
    CsvWriter csv(out_prefix + "_" + name + ".csv");
    csv.comment("scenario=" + subcommand + " config_hash=" + config.hash() +
                " seed=" + std::to_string(config.seed));
    csv.header(columns);
    return csv;
  }

  void note(const std::string& line) {
    summary << line << "\n";
    std::cout << line << "\n";
  }

  void finish() {
    std::ofstream out(out_prefix + "_summary.txt");
    out << "scenario=" << subcommand << " config_hash=" << config.hash()
        << " seed=" << config.seed << "\n";
    out << summary.str();
  }
};

Complex random_amplitude(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  return std::polar(mag(rng), phase(rng));
}

void run_darkstate_check(RunContext& ctx) {
  const auto& raw = ctx.config.raw;
  std::vector<int> n_values = raw.value("N_values", std::vector<int>{1, 2, 3, 4, 5});
  std::vector<int> q_values = raw.value("Q_values", std::vector<int>{1, 2, 3});
  std::vector<int> exc_values = raw.value("n_values", std::vector<int>{1, 2});
  const int draws = ctx.config.integer_or("draws", 20);

  std::mt19937_64 rng(ctx.config.seed);
  CsvWriter csv = ctx.open_csv("residuals",
                               {"N", "Q", "n", "draw", "residual", "excited_population"});
  double worst = 0.0;
  for (int n_atoms : n_values) {
    for (int q : q_values) {
      for (int n : exc_values) {
        SectorSpec spec{n_atoms, q, n, {}};
        const SymmetricBasis basis = enumerate_sector(spec);
        for (int draw = 0; draw < draws; ++draw) {
          ModelParams params;
          params.num_atoms = n_atoms;
          params.num_modes = q;
          params.gamma.assign(static_cast<size_t>(q), 0.0);
          std::vector<Complex> controls;
          for (int i = 0; i < q; ++i) {
            params.g.push_back(random_amplitude(rng, 0.5, 2.0));
            controls.push_back(random_amplitude(rng, 0.1, 4.0));
          }
          const DarkState dark = dark_state(params, controls, basis, n);
          const SparseOperator h =
              build_interaction_hamiltonian(params, controls, basis);
          const double residual = (h * dark.amplitudes).norm();
          double excited = 0.0;
          for (int i = 0; i < basis.dimension(); ++i) {
            for (int mode = 1; mode <= q; ++mode) {
              excited += basis.atoms_in_a(basis.state(i), mode) *
                         std::norm(dark.amplitudes(i));
            }
          }
          csv.row({static_cast<double>(n_atoms), static_cast<double>(q),
                   static_cast<double>(n), static_cast<double>(draw), residual,
                   excited});
          worst = std::max(worst, residual);
        }
      }
    }
  }
  ctx.note("max_dark_state_residual=" + CsvWriter::format(worst));
  if (worst > 1e-10) throw NumericalError("dark-state residual exceeds 1e-10");
}

void run_transform_check(RunContext& ctx) {
  const auto& raw = ctx.config.raw;
  std::vector<int> q_values = raw.value("Q_values", std::vector<int>{1, 2, 3, 4});
  const int draws = ctx.config.integer_or("draws", 100);
  const int n_atoms = ctx.config.integer_or("N", 2);
  const int excitation = ctx.config.integer_or("n", 2);

  std::mt19937_64 rng(ctx.config.seed);
  CsvWriter csv = ctx.open_csv(
      "structure", {"Q", "draw", "u_unitarity", "w_unitarity", "ed_classical",
                    "bq_ed", "lambda_mismatch"});
  double worst_unitarity = 0.0;
  double worst_structure = 0.0;
  for (int q : q_values) {
    const SymmetricBasis basis =
        enumerate_sector({n_atoms, q, excitation, {}});
    const SymmetricBasis lambda_basis = enumerate_sector({1, q, 1, {}});
    for (int draw = 0; draw < draws; ++draw) {
      ModelParams params;
      params.num_atoms = n_atoms;
      params.num_modes = q;
      params.gamma.assign(static_cast<size_t>(q), 0.0);
      std::vector<Complex> controls;
      for (int i = 0; i < q; ++i) {
        params.g.push_back(random_amplitude(rng, 0.5, 2.0));
        controls.push_back(random_amplitude(rng, 0.1, 4.0));
      }
      params.delta = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      params.Delta = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);

      const BrightDarkBasis atomic = atomic_transform(params, controls);
      const OpticalBasis optical = optical_transform(params, controls);
      const int dim = q;
      const double u_err = (atomic.u.adjoint() * atomic.u -
                            Eigen::MatrixXcd::Identity(dim, dim))
                               .cwiseAbs()
                               .maxCoeff();
      const double w_err = (optical.w.adjoint() * optical.w -
                            Eigen::MatrixXcd::Identity(dim, dim))
                               .cwiseAbs()
                               .maxCoeff();
      const SparseOperator transformed =
          transformed_hamiltonian(params, controls, basis);
      const StructureReport report = structure_report(transformed, basis);

      // Reduced-Lambda check on the single-atom single-excitation sector.
      ModelParams lambda_params = params;
      lambda_params.num_atoms = 1;
      const SparseOperator h1 =
          transformed_hamiltonian(lambda_params, controls, lambda_basis);
      const Eigen::MatrixXcd dense1(h1);
      Occupation photon(static_cast<size_t>(1 + 2 * q), 0);
      photon[static_cast<size_t>(2 * q)] = 1;  // one b_Q photon
      Occupation eb(static_cast<size_t>(1 + 2 * q), 0);
      eb[static_cast<size_t>(q)] = 1;  // |EB>
      Occupation ground_c(static_cast<size_t>(1 + 2 * q), 0);
      ground_c[0] = 1;  // |C>
      const int i_ph = *lambda_basis.find(photon);
      const int i_eb = *lambda_basis.find(eb);
      const int i_c = *lambda_basis.find(ground_c);
      Eigen::Matrix3cd reduced;
      const std::vector<int> idx{i_ph, i_eb, i_c};
      for (int r = 0; r < 3; ++r) {
        for (int col = 0; col < 3; ++col) {
          reduced(r, col) = dense1(idx[static_cast<size_t>(r)],
                                   idx[static_cast<size_t>(col)]);
        }
      }
      Eigen::Matrix3cd expected;
      const double g_eff = std::abs(optical.g_eff);
      const double omega = atomic.omega_total;
      expected << Complex(-0.5 * params.delta, 0.0), Complex(-g_eff, 0.0),
          Complex(0.0, 0.0), Complex(-g_eff, 0.0), Complex(0.0, 0.0),
          Complex(-omega, 0.0), Complex(0.0, 0.0), Complex(-omega, 0.0),
          Complex(-0.5 * params.Delta, 0.0);
      const double lambda_mismatch = (reduced - expected).cwiseAbs().maxCoeff();

      csv.row({static_cast<double>(q), static_cast<double>(draw), u_err, w_err,
               report.max_ed_classical, report.max_bq_ed, lambda_mismatch});
      worst_unitarity = std::max({worst_unitarity, u_err, w_err});
      worst_structure = std::max(
          {worst_structure, report.max_forbidden(), lambda_mismatch});
    }
  }
  ctx.note("max_unitarity_error=" + CsvWriter::format(worst_unitarity));
  ctx.note("max_structure_residual=" + CsvWriter::format(worst_structure));
  if (worst_unitarity > 1e-12 || worst_structure > 1e-10) {
    throw NumericalError("transform structure residual out of tolerance");
  }
}

void run_ratos_scenario(RunContext& ctx) {
  const ModelParams params = ctx.config.params();
  const SectorSpec spec = ctx.config.sector(1);
  const SymmetricBasis basis = enumerate_sector(spec);

  const auto& raw = ctx.config.raw;
  if (!raw.contains("ratos")) {
    throw std::invalid_argument("ratos scenario requires a 'ratos' block");
  }
  const auto& block = raw["ratos"];
  const int mode_i = block.value("mode_i", 1);
  const int mode_j = block.value("mode_j", 2);
  const double omega = block.value("omega", 5.0);
  std::vector<double> fades = block.value("fade_T", std::vector<double>{});
  if (fades.empty()) {
    throw std::invalid_argument("'ratos.fade_T' must list fade durations");
  }

  EvolutionConfig evolution;
  evolution.t_end = 1.0;  // set per run
  evolution.dt = block.value("dt", 0.0);
  evolution.record_every = 1 << 20;
  evolution.record_dark_overlap = false;

  const std::vector<SweepRow> rows = adiabaticity_sweep(
      params, basis, spec.excitation, mode_i, mode_j, omega, fades, evolution);

  CsvWriter csv = ctx.open_csv("sweep", {"fade_T", "fidelity", "infidelity",
                                         "absorbed"});
  for (const SweepRow& row : rows) {
    csv.row({row.fade_duration, row.fidelity, 1.0 - row.fidelity, row.absorbed});
  }
  ctx.note("final_fidelity=" + CsvWriter::format(rows.back().fidelity));
  ctx.note("final_absorbed=" + CsvWriter::format(rows.back().absorbed));
}

void run_spectrum(RunContext& ctx) {
  const ModelParams params = ctx.config.params();
  const std::vector<Complex> controls = ctx.config.static_controls();
  const auto& raw = ctx.config.raw;

  double delta_min = -4.0, delta_max = 4.0;
  int points = 401;
  if (raw.contains("scan")) {
    delta_min = raw["scan"].value("delta_min", delta_min);
    delta_max = raw["scan"].value("delta_max", delta_max);
    points = raw["scan"].value("points", points);
  }
  std::vector<double> grid(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<size_t>(i)] =
        delta_min + (delta_max - delta_min) * i / (points - 1);
  }
  const std::vector<Complex> chi = susceptibility(params, controls, grid);
  CsvWriter csv = ctx.open_csv("susceptibility", {"delta", "chi_re", "chi_im"});
  for (int i = 0; i < points; ++i) {
    csv.row({grid[static_cast<size_t>(i)], chi[static_cast<size_t>(i)].real(),
             chi[static_cast<size_t>(i)].imag()});
  }
  const double fwhm = transparency_fwhm(params, controls);
  ctx.note("transparency_fwhm=" + CsvWriter::format(fwhm));

  if (raw.contains("measure") && raw["measure"].value("enabled", false)) {
    TransmissionScanConfig scan;
    scan.pulse_rms_time = raw["measure"].value("pulse_rms_time", scan.pulse_rms_time);
    scan.optical_depth = raw["measure"].value("optical_depth", scan.optical_depth);
    scan.medium_length = raw["measure"].value("medium_length", scan.medium_length);
    scan.dz = raw["measure"].value("dz", scan.dz);
    double omega_amp = 0.0;
    for (const Complex& c : controls) omega_amp += std::norm(c);
    omega_amp = std::sqrt(omega_amp);
    const double measured = measure_transparency_fwhm(params, omega_amp, scan);
    ctx.note("measured_fwhm=" + CsvWriter::format(measured));
    ctx.note("fwhm_relative_error=" +
             CsvWriter::format(std::abs(measured - fwhm) / fwhm));
  }
}

void run_slowdown_scenario(RunContext& ctx) {
  const ModelParams params = ctx.config.params();
  SlowdownSetup setup;
  const auto& raw = ctx.config.raw;
  if (raw.contains("slowdown")) {
    const auto& block = raw["slowdown"];
    setup.omega = block.value("omega", setup.omega);
    setup.pulse_rms_time = block.value("pulse_rms_time", setup.pulse_rms_time);
    setup.medium_length = block.value("medium_length", setup.medium_length);
    setup.dz = block.value("dz", setup.dz);
  }
  const SlowdownResult result = run_slowdown(params, setup);
  CsvWriter csv = ctx.open_csv(
      "slowdown", {"measured_delay", "measured_vg", "predicted_vg",
                   "group_index", "transmitted_fraction"});
  csv.row({result.measured_delay, result.measured_vg, result.predicted_vg,
           result.group_index, result.transmitted_fraction});
  ctx.note("measured_vg=" + CsvWriter::format(result.measured_vg));
  ctx.note("predicted_vg=" + CsvWriter::format(result.predicted_vg));
  ctx.note("vg_relative_error=" +
           CsvWriter::format(std::abs(result.measured_vg - result.predicted_vg) /
                             result.predicted_vg));
}

void run_storage_scenario(RunContext& ctx) {
  const ModelParams params = ctx.config.params();
  StorageSetup setup;
  const auto& raw = ctx.config.raw;
  if (raw.contains("storage")) {
    const auto& block = raw["storage"];
    setup.omega = block.value("omega", setup.omega);
    setup.store_mode = block.value("store_mode", setup.store_mode);
    setup.retrieve_mode = block.value("retrieve_mode", setup.retrieve_mode);
    setup.pulse_rms_time = block.value("pulse_rms_time", setup.pulse_rms_time);
    setup.medium_length = block.value("medium_length", setup.medium_length);
    setup.dz = block.value("dz", setup.dz);
    setup.ramp_duration = block.value("ramp_duration", setup.ramp_duration);
    setup.hold_duration = block.value("hold_duration", setup.hold_duration);
  }
  const StorageResult result = run_storage_cycle(params, setup);
  CsvWriter csv = ctx.open_csv(
      "storage", {"input_energy", "output_energy", "retrieved_fraction",
                  "retrieve_mode_fraction", "held_field_energy",
                  "held_spin_energy", "compression_factor",
                  "predicted_compression"});
  csv.row({result.input_energy, result.output_energy, result.retrieved_fraction,
           result.retrieve_mode_fraction, result.held_field_energy,
           result.held_spin_energy, result.compression_factor.value_or(-1.0),
           result.predicted_compression});
  ctx.note("retrieved_fraction=" + CsvWriter::format(result.retrieved_fraction));
  ctx.note("retrieve_mode_fraction=" +
           CsvWriter::format(result.retrieve_mode_fraction));
}

void run_convert_scenario(RunContext& ctx) {
  const ModelParams params = ctx.config.params();
  ConversionSetup setup;
  const auto& raw = ctx.config.raw;
  if (raw.contains("convert")) {
    const auto& block = raw["convert"];
    setup.omega = block.value("omega", setup.omega);
    setup.mode_in = block.value("mode_in", setup.mode_in);
    setup.mode_out = block.value("mode_out", setup.mode_out);
    setup.pulse_rms_time = block.value("pulse_rms_time", setup.pulse_rms_time);
    setup.medium_length = block.value("medium_length", setup.medium_length);
    setup.dz = block.value("dz", setup.dz);
    setup.fade_duration = block.value("fade_duration", setup.fade_duration);
  }
  const ConversionResult result = run_conversion(params, setup);
  CsvWriter csv = ctx.open_csv(
      "convert", {"input_energy", "output_energy", "output_mode_fraction",
                  "total_transmission", "shape_overlap"});
  csv.row({result.input_energy, result.output_energy,
           result.output_mode_fraction, result.total_transmission,
           result.shape_overlap});
  ctx.note("output_mode_fraction=" +
           CsvWriter::format(result.output_mode_fraction));
  ctx.note("shape_overlap=" + CsvWriter::format(result.shape_overlap));
}

void run_hom(RunContext& ctx) {
  const ModelParams params = ctx.config.params();
  const auto& raw = ctx.config.raw;
  std::vector<std::vector<int>> inputs =
      raw.value("inputs", std::vector<std::vector<int>>{{1, 1}});
  std::vector<Complex> controls_in = ctx.config.static_controls();
  std::vector<Complex> controls_out = controls_in;
  if (raw.contains("controls_out")) {
    controls_out.clear();
    for (const auto& value : raw["controls_out"]) {
      controls_out.push_back(parse_complex(value));
    }
  }
  const OpticalBasis in_basis = optical_transform(params, controls_in);
  const OpticalBasis out_basis = optical_transform(params, controls_out);

  CsvWriter csv = ctx.open_csv("coupling", {"input", "coupling_probability",
                                            "absorbed_end_to_end"});
  for (const std::vector<int>& occupation : inputs) {
    const FockInput input = FockInput::fock(occupation);
    const double prob = coupling_probability(input, in_basis.w);
    const TransferResult transfer =
        end_to_end_transfer(input, in_basis.w, out_basis.w);
    std::string label;
    for (size_t i = 0; i < occupation.size(); ++i) {
      label += (i ? "|" : "") + std::to_string(occupation[i]);
    }
    csv.row({label, CsvWriter::format(prob), CsvWriter::format(transfer.absorbed)});
    ctx.note("coupling[" + label + "]=" + CsvWriter::format(prob));
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-lambda EIT / RATOS scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_prefix = "ratos_out";
  std::vector<std::string> overrides;

  const std::vector<std::pair<std::string, std::function<void(RunContext&)>>>
      scenarios = {
          {"darkstate-check", run_darkstate_check},
          {"transform-check", run_transform_check},
          {"ratos", run_ratos_scenario},
          {"spectrum", run_spectrum},
          {"slowdown", run_slowdown_scenario},
          {"storage", run_storage_scenario},
          {"convert", run_convert_scenario},
          {"hom", run_hom},
      };

  std::string chosen;
  for (const auto& [name, fn] : scenarios) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario configuration file")
        ->required();
    sub->add_option("--set", overrides, "override: path.to.key=value");
    sub->add_option("--out", out_prefix, "output file prefix");
    sub->callback([&chosen, name = name]() { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunContext ctx{ScenarioConfig::load(config_path, overrides), out_prefix,
                   chosen, {}};
    for (const auto& [name, fn] : scenarios) {
      if (name == chosen) {
        fn(ctx);
        ctx.finish();
        return 0;
      }
    }
    std::cerr << "unknown subcommand: " << chosen << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ratos
