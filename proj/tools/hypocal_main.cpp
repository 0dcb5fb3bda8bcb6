#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hypocal/io.hpp"
#include "hypocal/parallel.hpp"
#include "hypocal/reference.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hypocal;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitRejected = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_flag;
  int trials = 100;
  int threads = 0;  // 0 = hardware concurrency
};

std::uint64_t resolve_seed(const CommonOptions& opt, const io::RunConfig& cfg) {
  if (opt.seed_flag) return *opt.seed_flag;  // flag wins
  if (const char* env = std::getenv("HYPOCAL_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigError("HYPOCAL_SEED is not an integer");
  }
  return cfg.ga.seed;
}

int resolve_threads(const CommonOptions& opt) {
  return opt.threads > 0 ? opt.threads : hardware_threads();
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

int run_simulate(const CommonOptions& opt) {
  const io::RunConfig cfg = io::load_config(opt.config_path);
  io::validate_for_mode(cfg, io::Mode::Simulate);
  const fs::path out = prepare_out_dir(opt.out_dir);

  for (const auto& entry : cfg.tests) {
    const Trajectory traj = simulate(entry.spec, *cfg.params);
    io::write_curve_csv((out / ("curve_" + entry.name + ".csv")).string(), traj);
    const auto& last = traj.samples.back();
    std::cout << entry.name << ": " << traj.size() << " samples, final T1 = " << last.T1
              << " kPa, T2 = " << last.T2 << " kPa, e = " << last.e << '\n';
  }
  return 0;
}

int run_validate(const CommonOptions& opt) {
  const fs::path out = prepare_out_dir(opt.out_dir);
  const HypoParams params = reference::wolffersdorff_params();

  const Trajectory oedo = simulate(reference::validation_oedometer(), params);
  const Trajectory triax = simulate(reference::validation_triaxial(), params);
  io::write_curve_csv((out / "validate_oedometer.csv").string(), oedo);
  io::write_curve_csv((out / "validate_triaxial.csv").string(), triax);

  std::cout << "oedometer: e " << oedo.e0() << " -> " << oedo.samples.back().e
            << ", T1 " << oedo.samples.front().T1 << " -> " << oedo.samples.back().T1
            << " kPa\n";
  std::cout << "triaxial : eps_a -> " << triax.samples.back().t << ", q_max ";
  double q_max = 0.0;
  for (int i = 0; i < triax.size(); ++i) q_max = std::max(q_max, triax.q(i));
  std::cout << q_max << " kPa, e -> " << triax.samples.back().e << '\n';
  std::cout << "curves written to " << out.string() << '\n';
  return 0;
}

int run_calibrate(const CommonOptions& opt) {
  io::RunConfig cfg = io::load_config(opt.config_path);
  io::validate_for_mode(cfg, io::Mode::Calibrate);
  const ExperimentalDataset data = io::load_dataset(cfg.tests, cfg.stresses_positive);

  cfg.ga.seed = resolve_seed(opt, cfg);
  cfg.ga.threads = resolve_threads(opt);
  const fs::path out = prepare_out_dir(opt.out_dir);

  const CalibrationResult result = run(cfg.ga, data);
  if (!result.feasible()) {
    std::cerr << "error: rejected: no feasible parameter set found\n";
    return kExitRejected;
  }

  io::write_calibration_report_json((out / "report.json").string(), result);
  io::write_calibration_report_text((out / "report.txt").string(), result);
  for (const auto& entry : cfg.tests) {
    const Trajectory traj = simulate(entry.spec, result.expanded);
    io::write_curve_csv((out / ("fit_" + entry.name + ".csv")).string(), traj);
  }

  std::cout << "best cost " << result.cost << " (seed " << result.seed << ")\n"
            << io::param_table(result.expanded);
  return 0;
}

int run_ensemble_mode(const CommonOptions& opt) {
  io::RunConfig cfg = io::load_config(opt.config_path);
  io::validate_for_mode(cfg, io::Mode::Ensemble);
  const ExperimentalDataset data = io::load_dataset(cfg.tests, cfg.stresses_positive);

  const std::uint64_t base_seed = resolve_seed(opt, cfg);
  cfg.ga.threads = resolve_threads(opt);
  const fs::path out = prepare_out_dir(opt.out_dir);

  const EnsembleResult ensemble = run_ensemble(cfg.ga, data, opt.trials, base_seed);
  if (ensemble.trials.empty()) {
    std::cerr << "error: rejected: all " << opt.trials << " trials were infeasible\n";
    return kExitRejected;
  }

  io::write_ensemble_report_json((out / "ensemble.json").string(), ensemble, base_seed);
  io::write_ensemble_report_text((out / "ensemble.txt").string(), ensemble);
  std::cout << ensemble.trials.size() << "/" << ensemble.n_trials
            << " feasible trials; reports written to " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sand hypoplasticity element tests, GA calibration and uncertainty analysis"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::uint64_t seed_value = 0;
  std::vector<CLI::Option*> seed_options;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* config = sub->add_option("--config", opt.config_path, "configuration file");
    if (needs_config) config->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (default: .)");
    seed_options.push_back(
        sub->add_option("--seed", seed_value, "RNG seed (overrides HYPOCAL_SEED and config)"));
    sub->add_option("--threads", opt.threads, "worker thread cap (default: hardware)");
  };

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "integrate the configured tests");
  add_common(simulate_cmd, true);
  CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "fit parameters to the configured data");
  add_common(calibrate_cmd, true);
  CLI::App* ensemble_cmd = app.add_subcommand("ensemble", "repeated calibration statistics");
  add_common(ensemble_cmd, true);
  ensemble_cmd->add_option("--trials", opt.trials, "number of repeated calibrations")
      ->check(CLI::PositiveNumber);
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "reference response curves for the bundled parameters");
  add_common(validate_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }
  for (const CLI::Option* o : seed_options)
    if (o->count() > 0) opt.seed_flag = seed_value;

  try {
    if (simulate_cmd->parsed()) return run_simulate(opt);
    if (calibrate_cmd->parsed()) return run_calibrate(opt);
    if (ensemble_cmd->parsed()) return run_ensemble_mode(opt);
    return run_validate(opt);
  } catch (const ParseError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const ValidationError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitData;
  } catch (const SimulationRejected& e) {
    std::cerr << "error: rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const NonUniqueRootError& e) {
    std::cerr << "error: rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
