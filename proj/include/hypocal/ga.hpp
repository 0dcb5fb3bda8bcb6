#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hypocal/curve_metrics.hpp"
#include "hypocal/rng.hpp"
#include "hypocal/types.hpp"

namespace hypocal {

/// Genetic-algorithm settings. Bounds are over the free search coordinates
/// (phi_c [rad], h_s [kPa], n, e_c0, alpha, beta).
struct GaConfig {
  int n_individuals = 500;
  int n_iterations = 20;
  double elite_fraction = 0.01;
  double mating_fraction = 0.50;
  double mutation_start = 0.5;
  double mutation_end = 0.1;
  ParamVector bounds_min = ParamVector::Zero();
  ParamVector bounds_max = ParamVector::Zero();
  double lambda_d = 0.60;
  double lambda_i = 1.20;
  CostWeights weights{};
  std::uint64_t seed = 0;
  int threads = 1;  ///< worker cap for cost evaluations; does not affect results
};

void validate(const GaConfig& config);

struct Population {
  Eigen::Matrix<double, Eigen::Dynamic, 6> individuals;  ///< one row per individual
  Eigen::VectorXd costs;      ///< NaN = unevaluated, +inf = infeasible
  std::vector<int> ranking;   ///< cost-ascending, ties stable by index

  int size() const { return static_cast<int>(individuals.rows()); }
};

/// Unevaluated initial population: the first ceil(N_i/2) rows are uniform over
/// the box, the remaining floor(N_i/2) Gaussian around the box midpoint with
/// sigma = range/6, clamped to the bounds. Draws are row-major.
Population init_pop(const GaConfig& config, Rng& rng);

/// Fills every unevaluated cost (in parallel, gathered by index) and rebuilds
/// the ranking. Infeasible individuals carry +inf and rank last.
const std::vector<int>& eval_pop(Population& pop, const ExperimentalDataset& data,
                                 const GaConfig& config);

/// Exponentially decaying mutated fraction,
/// mu0 exp[(it/N_I) ln(mu_fin/mu0)] for it in [0, N_I].
double mutation_fraction(int iteration, const GaConfig& config);

/// Rank in [0, n_mating) drawn with discrete triangular weights
/// (n_mating - 1 - rank); the last pool rank has zero probability.
int triangular_rank(int n_mating, Rng& rng);

/// Population index of a parent drawn by triangular rank over the pool.
int select_parent(const std::vector<int>& ranking, int n_mating, Rng& rng);

/// Componentwise blend theta*a + (1-theta)*b with independent
/// theta_k ~ U[0,1]; stays inside the box by convexity.
ParamVector crossover(const ParamVector& a, const ParamVector& b, Rng& rng);

/// Next generation: N_E elites (costs carried over), N_M fresh uniform
/// mutants, and offspring from triangular selection over the best
/// N_f = mating_fraction * N_i individuals followed by blend crossover.
/// Draw order: mutant rows, then per offspring two rank draws and six thetas.
Population update_pop(const Population& pop, int iteration, const GaConfig& config,
                      Rng& rng);

struct CalibrationResult {
  SearchParams best{};
  HypoParams expanded{};
  double cost = kInfeasibleCost;
  std::array<double, 3> plane_deltas{0.0, 0.0, 0.0};
  std::vector<double> best_history;       ///< best cost per evaluated generation
  std::vector<double> mean_pool_history;  ///< mean cost over the mating pool
  std::uint64_t seed = 0;

  bool feasible() const { return cost < kInfeasibleCost; }
};

/// Full calibration: N_I generations of evaluate + update, one final
/// evaluation. Deterministic for fixed (config, data, seed).
CalibrationResult run(const GaConfig& config, const ExperimentalDataset& data);

}  // namespace hypocal
