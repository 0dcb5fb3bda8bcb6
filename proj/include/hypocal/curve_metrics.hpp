#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hypocal/element_sim.hpp"
#include "hypocal/errors.hpp"
#include "hypocal/types.hpp"

namespace hypocal {

/// Dimensionless comparison planes: (eps_E_hat, T1_hat) for the oedometer,
/// (eps_a_hat, q_hat) and (eps_a_hat, eps_v_hat) for the triaxial test.
enum class Plane { Oedometer, Deviatoric, Volumetric };

/// Digitized laboratory curves for one test. Matrices hold one point per row:
///   oedometer:  (T1 [kPa, compression negative], e)
///   deviatoric: (eps_a, q [kPa])
///   volumetric: (eps_a, eps_v)
/// Oedometer tests fill `oedometer`; triaxial tests fill the other two.
struct ExperimentalTest {
  TestSpec spec;
  std::string name;
  Eigen::MatrixX2d oedometer;
  Eigen::MatrixX2d deviatoric;
  Eigen::MatrixX2d volumetric;
};

struct ExperimentalDataset {
  std::vector<ExperimentalTest> tests;

  int count(TestKind kind) const;
};

/// Structural checks: at least two points per curve, non-decreasing strain,
/// densifying oedometer path, strictly compressive stresses, M <= n_step + 1.
void validate(const ExperimentalDataset& data);

/// Curve mapped into one of the dimensionless planes. Normalizers always come
/// from the experimental curve, so a pair scaled together is comparable; the
/// scaled experimental curve starts at the origin (exactly on strain axes)
/// and its largest |coordinate| per axis is 1.
struct ScaledCurve {
  Eigen::MatrixX2d points;
  Plane plane = Plane::Oedometer;
};

struct CostWeights {
  double w1 = 1.0;  ///< oedometer plane
  double w2 = 1.0;  ///< deviatoric plane
  double w3 = 1.0;  ///< volumetric plane
};

void validate(const CostWeights& w);

/// Scales the experimental curve of `plane` and the simulated trajectory with
/// the experimental normalizers. Throws DegenerateNormalizer when a
/// normalizer vanishes.
std::pair<ScaledCurve, ScaledCurve> scale_pair(const ExperimentalTest& test,
                                               const Trajectory& trajectory,
                                               Plane plane);

/// Per-point distance from each of the M points to the nearest segment of the
/// polyline (endpoint-clamped Euclidean point-to-segment distance).
Eigen::VectorXd frechet_vector(const Eigen::MatrixX2d& points,
                               const Eigen::MatrixX2d& polyline);

inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

struct CostBreakdown {
  double total = kInfeasibleCost;
  std::array<double, 3> deltas{0.0, 0.0, 0.0};  ///< per-plane ||D_F||_2
  bool feasible = false;
};

/// Weighted sum w1 d1 + w2 d2 + w3 d3 of the per-plane distance norms, with
/// distances of all tests contributing to a plane concatenated before the
/// norm. Simulation rejection or a non-unique constraint root yields the
/// +infinity sentinel; only configuration errors throw.
CostBreakdown cost_detail(const SearchParams& params, const ExperimentalDataset& data,
                          const CostWeights& weights);

double cost(const SearchParams& params, const ExperimentalDataset& data,
            const CostWeights& weights);

}  // namespace hypocal
