#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hypocal/ga.hpp"

namespace hypocal {

struct ParamSummary {
  double mean = 0;
  double stddev = 0;  ///< sample standard deviation (n - 1 denominator)
  double cv = 0;      ///< stddev / mean
  double min = 0;
  double max = 0;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r = 0;
};

/// Ordinary least squares on (x, y) rows. Throws ZeroVarianceError when x is
/// constant.
LineFit fit_line(const Eigen::MatrixX2d& samples);

/// Product-moment correlation matrix of the columns: symmetric, unit
/// diagonal, entries in [-1, 1]. Throws ZeroVarianceError naming a constant
/// column.
Eigen::MatrixXd pearson(const Eigen::MatrixXd& samples);

std::array<ParamSummary, kNumSearchParams> summarize(const Eigen::MatrixXd& samples);

/// Linear fit emitted for a strongly correlated parameter pair.
struct Regression {
  int xi = 0;  ///< column index of the regressor
  int yi = 0;
  LineFit fit;
};

inline constexpr double kRegressionThreshold = 0.7;  ///< |r| at which a pair is reported

struct EnsembleResult {
  std::vector<CalibrationResult> trials;  ///< feasible trials, in trial order
  int n_trials = 0;
  int n_failed = 0;                       ///< trials whose final population was all-infeasible
  Eigen::MatrixXd samples;                ///< best individual per feasible trial (rows x 6)
  std::array<ParamSummary, kNumSearchParams> summary{};
  Eigen::Matrix<double, 6, 6> pearson;
  bool pearson_valid = false;             ///< false when fewer than 2 feasible trials or a constant column
  std::vector<Regression> regressions;
};

/// Repeats the calibration n_trials times with seeds base_seed + k and
/// aggregates statistics over the best individual of each feasible trial.
/// Trials run in parallel (config.threads workers, each trial single-threaded);
/// aggregation is ordered by trial index, so results are deterministic.
EnsembleResult run_ensemble(const GaConfig& config, const ExperimentalDataset& data,
                            int n_trials, std::uint64_t base_seed);

}  // namespace hypocal
