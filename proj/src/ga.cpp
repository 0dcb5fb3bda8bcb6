#include "hypocal/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hypocal/parallel.hpp"

namespace hypocal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int clamp_pool_size(const GaConfig& config) {
  const long raw = std::lround(config.mating_fraction * config.n_individuals);
  return static_cast<int>(std::clamp<long>(raw, 2, config.n_individuals));
}

}  // namespace

void validate(const GaConfig& config) {
  if (config.n_individuals < 2) throw ConfigError("n_individuals must be >= 2");
  if (config.n_iterations < 1) throw ConfigError("n_iterations must be >= 1");
  if (!(config.elite_fraction > 0.0 && config.elite_fraction <= 1.0))
    throw ConfigError("elite_fraction must lie in (0, 1]");
  if (!(config.mating_fraction > 0.0 && config.mating_fraction <= 1.0))
    throw ConfigError("mating_fraction must lie in (0, 1]");
  if (!(config.mutation_end > 0.0 && config.mutation_end <= config.mutation_start &&
        config.mutation_start < 1.0))
    throw ConfigError("mutation fractions must satisfy 0 < mu_fin <= mu0 < 1");
  for (int j = 0; j < kNumSearchParams; ++j) {
    if (!(config.bounds_min[j] < config.bounds_max[j]))
      throw ConfigError(std::string("empty bound interval for ") + kParamNames[j]);
  }
  if (!(config.lambda_d > 0.0 && config.lambda_d < 1.0 && config.lambda_i > 1.0))
    throw ConfigError("ratios must satisfy 0 < lambda_d < 1 < lambda_i");
  validate(config.weights);
}

Population init_pop(const GaConfig& config, Rng& rng) {
  validate(config);
  const int n = config.n_individuals;
  const int n_gauss = n / 2;
  const int n_uniform = n - n_gauss;

  Population pop;
  pop.individuals.resize(n, kNumSearchParams);
  pop.costs = Eigen::VectorXd::Constant(n, kNaN);

  for (int i = 0; i < n_uniform; ++i)
    for (int j = 0; j < kNumSearchParams; ++j)
      pop.individuals(i, j) = rng.uniform(config.bounds_min[j], config.bounds_max[j]);

  for (int i = n_uniform; i < n; ++i) {
    for (int j = 0; j < kNumSearchParams; ++j) {
      const double lo = config.bounds_min[j];
      const double hi = config.bounds_max[j];
      const double mid = 0.5 * (lo + hi);
      const double sigma = (hi - lo) / 6.0;
      pop.individuals(i, j) = std::clamp(rng.normal(mid, sigma), lo, hi);
    }
  }
  return pop;
}

const std::vector<int>& eval_pop(Population& pop, const ExperimentalDataset& data,
                                 const GaConfig& config) {
  const int n = pop.size();
  parallel_for(n, config.threads, [&](int i) {
    if (std::isnan(pop.costs[i])) {
      const auto candidate = SearchParams::from_vector(
          pop.individuals.row(i).transpose(), config.lambda_d, config.lambda_i);
      pop.costs[i] = cost(candidate, data, config.weights);
    }
  });

  pop.ranking.resize(n);
  std::iota(pop.ranking.begin(), pop.ranking.end(), 0);
  std::stable_sort(pop.ranking.begin(), pop.ranking.end(),
                   [&](int a, int b) { return pop.costs[a] < pop.costs[b]; });
  return pop.ranking;
}

double mutation_fraction(int iteration, const GaConfig& config) {
  if (iteration < 0 || iteration > config.n_iterations)
    throw ConfigError("iteration outside [0, n_iterations]");
  const double exponent = static_cast<double>(iteration) / config.n_iterations;
  return config.mutation_start *
         std::exp(exponent * std::log(config.mutation_end / config.mutation_start));
}

int triangular_rank(int n_mating, Rng& rng) {
  if (n_mating < 2) throw ConfigError("triangular selection needs a pool of >= 2");
  const double total = 0.5 * static_cast<double>(n_mating) * (n_mating - 1);
  const double target = rng.uniform01() * total;
  // cum(r) = sum_{k<=r} (n-1-k), strictly increasing up to rank n-2
  const auto cum = [n_mating](int r) {
    return (r + 1.0) * (n_mating - 1.0) - 0.5 * r * (r + 1.0);
  };
  int lo = 0, hi = n_mating - 2;
  while (lo < hi) {
    const int midpoint = (lo + hi) / 2;
    if (cum(midpoint) > target)
      hi = midpoint;
    else
      lo = midpoint + 1;
  }
  return lo;
}

int select_parent(const std::vector<int>& ranking, int n_mating, Rng& rng) {
  if (n_mating > static_cast<int>(ranking.size()))
    throw ConfigError("mating pool larger than the ranked population");
  return ranking[triangular_rank(n_mating, rng)];
}

ParamVector crossover(const ParamVector& a, const ParamVector& b, Rng& rng) {
  ParamVector out;
  for (int j = 0; j < kNumSearchParams; ++j) {
    const double theta = rng.uniform01();
    // clamp keeps the blend inside the parent bracket under rounding
    out[j] = std::clamp(theta * a[j] + (1.0 - theta) * b[j], std::min(a[j], b[j]),
                        std::max(a[j], b[j]));
  }
  return out;
}

Population update_pop(const Population& pop, int iteration, const GaConfig& config,
                      Rng& rng) {
  const int n = pop.size();
  if (static_cast<int>(pop.ranking.size()) != n)
    throw ConfigError("update_pop requires an evaluated population");

  const int n_elite =
      static_cast<int>(std::max(1L, std::lround(config.elite_fraction * n)));
  int n_mut = static_cast<int>(std::lround(mutation_fraction(iteration, config) * n));
  n_mut = std::min(n_mut, n - n_elite);
  const int n_offspring = n - n_elite - n_mut;
  const int n_pool = clamp_pool_size(config);

  Population next;
  next.individuals.resize(n, kNumSearchParams);
  next.costs = Eigen::VectorXd::Constant(n, kNaN);

  int row = 0;
  for (int i = 0; i < n_elite; ++i, ++row) {
    next.individuals.row(row) = pop.individuals.row(pop.ranking[i]);
    next.costs[row] = pop.costs[pop.ranking[i]];  // deterministic cost: keep it
  }
  for (int i = 0; i < n_mut; ++i, ++row)
    for (int j = 0; j < kNumSearchParams; ++j)
      next.individuals(row, j) = rng.uniform(config.bounds_min[j], config.bounds_max[j]);
  for (int i = 0; i < n_offspring; ++i, ++row) {
    const int p1 = select_parent(pop.ranking, n_pool, rng);
    const int p2 = select_parent(pop.ranking, n_pool, rng);
    next.individuals.row(row) =
        crossover(pop.individuals.row(p1).transpose(),
                  pop.individuals.row(p2).transpose(), rng)
            .transpose();
  }
  return next;
}

CalibrationResult run(const GaConfig& config, const ExperimentalDataset& data) {
  validate(config);
  validate(data);

  Rng rng(config.seed);
  Population pop = init_pop(config, rng);

  CalibrationResult result;
  result.seed = config.seed;
  const int n_pool = clamp_pool_size(config);

  const auto evaluate_and_record = [&] {
    eval_pop(pop, data, config);
    result.best_history.push_back(pop.costs[pop.ranking[0]]);
    double sum = 0.0;
    for (int i = 0; i < n_pool; ++i) sum += pop.costs[pop.ranking[i]];
    result.mean_pool_history.push_back(sum / n_pool);
  };

  for (int it = 1; it <= config.n_iterations; ++it) {
    evaluate_and_record();
    pop = update_pop(pop, it, config, rng);
  }
  evaluate_and_record();

  const int best = pop.ranking[0];
  result.best = SearchParams::from_vector(pop.individuals.row(best).transpose(),
                                          config.lambda_d, config.lambda_i);
  result.expanded = result.best.expand();
  result.cost = pop.costs[best];
  if (result.feasible())
    result.plane_deltas = cost_detail(result.best, data, config.weights).deltas;
  return result;
}

}  // namespace hypocal
