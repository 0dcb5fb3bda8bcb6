#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hypocal/errors.hpp"
#include "hypocal/sh_core.hpp"
#include "hypocal/types.hpp"

namespace hypocal {

/// Reference axial stretching rate. The law is first-order homogeneous in D,
/// so the magnitude is arbitrary; both test drivers fix D1 = -1 and the
/// pseudo-time axis is the axial strain.
inline constexpr double kReferenceD1 = -1.0;

inline constexpr int kDefaultSteps = 100;

enum class TestKind { Oedometer, TriaxialDrained };

/// Definition of one element test: initial state plus a termination target
/// (final void ratio for the oedometer, final axial strain for the triaxial
/// drained test).
struct TestSpec {
  TestKind kind = TestKind::Oedometer;
  ElementState initial{};
  double e_fin = 0.0;
  double eps_fin = 0.0;
  int n_step = kDefaultSteps;
};

void validate(const TestSpec& spec);

struct TrajectorySample {
  double t = 0;
  double T1 = 0;
  double T2 = 0;
  double e = 0;
};

/// Integrated response of one test on the uniform pseudo-time grid
/// t_k = k dt, k = 0..n_step.
struct Trajectory {
  std::vector<TrajectorySample> samples;

  int size() const { return static_cast<int>(samples.size()); }
  double e0() const { return samples.front().e; }

  double eps_a(int i) const { return samples[i].t; }
  double q(int i) const { return samples[i].T2 - samples[i].T1; }
  double eps_v(int i) const {
    return (samples[i].e - e0()) / (1.0 + e0());
  }
};

/// Stiffness matrix L, nonlinear vector N and the scalar factors of the
/// axisymmetric system, so that the stress rate is
///   (T1_dot, T2_dot) = f_s (L (D1, D2) + f_d N sqrt(D1^2 + 2 D2^2)).
/// L and N are dimensionless; det L > 0 for every admissible state.
struct AxisymRates {
  Eigen::Matrix2d L;
  Eigen::Vector2d N;
  double f_s = 0;
  double f_d = 0;
};

AxisymRates axisym_rates(const ElementState& state, const HypoParams& params);

struct OedometerRate {
  double T1_dot = 0;
  double T2_dot = 0;
  double e_dot = 0;
};

/// Rates under the oedometric constraint D2 = 0 with D1 = -1.
OedometerRate oedometer_rate(const ElementState& state, const HypoParams& params);

struct TriaxialRate {
  double T1_dot = 0;
  double D2 = 0;
  double e_dot = 0;
  double x = 0;         ///< the positive root |D| actually used
  double residual = 0;  ///< T2_dot / f_s; |residual| <= 1e-9 on acceptance
};

/// Rates under the drained triaxial constraint T2_dot = 0 with D1 = -1.
/// D2 is recovered by solving the constraint quadratic in x = |D|; throws
/// NonUniqueRootError unless exactly one positive root exists.
TriaxialRate triaxial_rate(const ElementState& state, const HypoParams& params);

/// Pseudo-time at which the termination target is reached:
/// oedometer t_f = -ln(1 - (e_0 - e_fin)/(e_0 + 1)), triaxial t_f = eps_fin.
double integration_time(const TestSpec& spec);

/// Explicit Euler integration with fixed dt = t_f/n_step. Admissibility
/// (tr(T) < 0 and e_d <= e <= e_i up to the clamp band) is checked at every
/// step; a violation throws SimulationRejected.
Trajectory simulate(const TestSpec& spec, const HypoParams& params);

/// Non-throwing variant for optimizer hot paths; on rejection returns
/// std::nullopt and fills *failure when given.
std::optional<Trajectory> try_simulate(const TestSpec& spec, const HypoParams& params,
                                       StepFailure* failure = nullptr);

}  // namespace hypocal
