#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypocal/curve_metrics.hpp"
#include "hypocal/ga.hpp"
#include "hypocal/stats.hpp"

namespace hypocal::io {

enum class Mode { Simulate, Calibrate, Ensemble, Validate };

/// One [test] section: the element test plus an optional data file path
/// (resolved against the config file's directory).
struct TestEntry {
  TestSpec spec;
  std::string name;
  std::string data_path;
};

/// Parsed run configuration. Angles are converted from degrees and stress
/// signs normalized exactly once, here.
struct RunConfig {
  std::optional<HypoParams> params;
  GaConfig ga;
  bool has_ga = false;
  bool has_bounds = false;
  std::vector<TestEntry> tests;
  bool stresses_positive = false;  ///< input files/config carry magnitudes
  std::string base_dir;
};

RunConfig load_config(const std::string& path);

/// Mode-specific requirements: simulate needs [params] and tests; calibrate
/// and ensemble need [bounds], data paths, and at least one oedometer and one
/// triaxial test.
void validate_for_mode(const RunConfig& config, Mode mode);

/// Reads the CSV files referenced by the entries. Columns are located by
/// header name (oedometer: T1_kPa,e; triaxial: eps_a,q_kPa,eps_v); extra
/// columns are ignored, so simulated curve files load as datasets too.
ExperimentalDataset load_dataset(const std::vector<TestEntry>& entries,
                                 bool stresses_positive);

/// Plot-ready trajectory file with columns t,T1_kPa,T2_kPa,e,eps_a,q_kPa,eps_v.
void write_curve_csv(const std::string& path, const Trajectory& traj);

/// Experimental-format file for one test (the format load_dataset reads).
void write_experimental_csv(const std::string& path, const ExperimentalTest& test);

std::string param_table(const HypoParams& params);

void write_calibration_report_text(const std::string& path, const CalibrationResult& result);
void write_calibration_report_json(const std::string& path, const CalibrationResult& result);

void write_ensemble_report_text(const std::string& path, const EnsembleResult& ensemble);
void write_ensemble_report_json(const std::string& path, const EnsembleResult& ensemble,
                                std::uint64_t base_seed);

}  // namespace hypocal::io
