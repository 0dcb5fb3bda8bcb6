#include "hypocal/stats.hpp"

#include <cmath>
#include <string>

#include "hypocal/parallel.hpp"

namespace hypocal {

namespace {

double column_variance(const Eigen::MatrixXd& m, int j, double mean) {
  // two-pass; callers divide by n-1 where a sample estimate is needed
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    const double d = m(i, j) - mean;
    s += d * d;
  }
  return s;
}

}  // namespace

LineFit fit_line(const Eigen::MatrixX2d& samples) {
  const int n = static_cast<int>(samples.rows());
  if (n < 2) throw DomainError("fit_line needs at least two samples");
  const double mx = samples.col(0).mean();
  const double my = samples.col(1).mean();
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = samples(i, 0) - mx;
    const double dy = samples(i, 1) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) throw ZeroVarianceError("fit_line: x column is constant");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 1.0;  // exact fit of a flat line
  return fit;
}

Eigen::MatrixXd pearson(const Eigen::MatrixXd& samples) {
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (n < 2) throw DomainError("pearson needs at least two samples");

  Eigen::VectorXd mean(d), sd(d);
  for (int j = 0; j < d; ++j) {
    mean[j] = samples.col(j).mean();
    const double var = column_variance(samples, j, mean[j]);
    if (!(var > 0.0))
      throw ZeroVarianceError("pearson: column " + std::to_string(j) + " is constant");
    sd[j] = std::sqrt(var);
  }

  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += (samples(i, a) - mean[a]) * (samples(i, b) - mean[b]);
      const double rho = s / (sd[a] * sd[b]);
      r(a, b) = rho;
      r(b, a) = rho;
    }
  }
  return r;
}

std::array<ParamSummary, kNumSearchParams> summarize(const Eigen::MatrixXd& samples) {
  if (samples.cols() != kNumSearchParams)
    throw DomainError("summarize expects 6 columns");
  if (samples.rows() < 1) throw DomainError("summarize needs at least one sample");

  std::array<ParamSummary, kNumSearchParams> out{};
  const int n = static_cast<int>(samples.rows());
  for (int j = 0; j < kNumSearchParams; ++j) {
    ParamSummary& s = out[j];
    s.mean = samples.col(j).mean();
    s.stddev = n > 1 ? std::sqrt(column_variance(samples, j, s.mean) / (n - 1)) : 0.0;
    s.cv = s.mean != 0.0 ? s.stddev / s.mean : 0.0;
    s.min = samples.col(j).minCoeff();
    s.max = samples.col(j).maxCoeff();
  }
  return out;
}

EnsembleResult run_ensemble(const GaConfig& config, const ExperimentalDataset& data,
                            int n_trials, std::uint64_t base_seed) {
  if (n_trials < 2) throw ConfigError("run_ensemble needs n_trials >= 2");
  validate(config);
  validate(data);

  std::vector<CalibrationResult> all(n_trials);
  parallel_for(n_trials, config.threads, [&](int k) {
    GaConfig trial = config;
    trial.seed = base_seed + static_cast<std::uint64_t>(k);
    trial.threads = 1;  // parallelism lives at the trial level here
    all[k] = run(trial, data);
  });

  EnsembleResult out;
  out.n_trials = n_trials;
  for (auto& trial : all) {
    if (trial.feasible())
      out.trials.push_back(std::move(trial));
    else
      ++out.n_failed;
  }

  const int n_ok = static_cast<int>(out.trials.size());
  out.samples.resize(n_ok, kNumSearchParams);
  for (int i = 0; i < n_ok; ++i)
    out.samples.row(i) = out.trials[i].best.free_values().transpose();

  if (n_ok >= 1) out.summary = summarize(out.samples);

  out.pearson.setConstant(std::numeric_limits<double>::quiet_NaN());
  if (n_ok >= 2) {
    try {
      out.pearson = pearson(out.samples);
      out.pearson_valid = true;
    } catch (const ZeroVarianceError&) {
      out.pearson_valid = false;  // degenerate ensemble: no correlation structure
    }
  }

  if (out.pearson_valid) {
    for (int a = 0; a < kNumSearchParams; ++a) {
      for (int b = a + 1; b < kNumSearchParams; ++b) {
        if (std::abs(out.pearson(a, b)) >= kRegressionThreshold) {
          Eigen::MatrixX2d pair(n_ok, 2);
          pair.col(0) = out.samples.col(a);
          pair.col(1) = out.samples.col(b);
          out.regressions.push_back({a, b, fit_line(pair)});
        }
      }
    }
  }
  return out;
}

}  // namespace hypocal
