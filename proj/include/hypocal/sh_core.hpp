#pragma once

#include <Eigen/Core>

#include "hypocal/errors.hpp"
#include "hypocal/types.hpp"

namespace hypocal {

/// Relative half-width of the tolerated overshoot band around [e_d, e_i].
/// Void ratios inside the band are clamped to the limit; beyond it the state
/// is inadmissible.
inline constexpr double kVoidBandTol = 1e-9;

/// Matsuoka-Nakai coefficient a = sqrt(3)(3 - sin phi_c) / (2 sqrt(2) sin phi_c).
/// Strictly decreasing in phi_c. Throws DomainError if sin(phi_c) <= 0.
double coeff_a(double phi_c);

/// Deviatoric stress factor F of the general law, evaluated on a full stress
/// tensor with tr(T) < 0. Returns exactly 1 for hydrostatic states and for
/// axisymmetric compressive states, where the general expression is an
/// indeterminate form with limit 1.
double factor_F(const Eigen::Matrix3d& T);

/// Axisymmetric overload: compressive axisymmetric states always sit on the
/// F = 1 branch.
double factor_F(const ElementState& state);

/// Bauer's compression law: e_d, e_c, e_i at stress trace trT (<= 0), each
/// equal to its zero-pressure value times exp[-(-trT/h_s)^n].
VoidLimits void_limits(const HypoParams& params, double trT);

/// Pyknotropy coefficient f_d = ((e - e_d)/(e_c - e_d))^alpha.
/// Throws AdmissibilityError when e < e_d beyond the clamp band.
double pykno_fd(double e, const VoidLimits& limits, double alpha);

/// Combined stiffness factor f_s (kPa-scaled), strictly positive for
/// admissible inputs. Equals the product of the original barotropy factor
/// f_b and density factor f_e = (e_c/e)^beta, which the Bauer ratio makes
/// equal to the single expression implemented here; the separate factors are
/// not exposed.
double stiffness_fs(const HypoParams& params, double e, double trT);

struct GeneralRate {
  Eigen::Matrix3d T_dot;  ///< stress rate (kPa per unit pseudo-time)
  double e_dot = 0;       ///< void ratio rate, (1 + e) tr(D)
};

/// General rate equation for an arbitrary stress tensor T and stretching D,
/// with zero spin so the objective rate equals the material rate.
/// First-order homogeneous in D.
GeneralRate rate_general(const Eigen::Matrix3d& T, const Eigen::Matrix3d& D,
                         double e, const HypoParams& params);

namespace detail {

/// Per-parameter-set constants reused across integration steps.
struct ParamConstants {
  double a = 0;       // Matsuoka-Nakai coefficient
  double a_sq = 0;
  double fs_denom = 0;  // 3 + a^2 - a sqrt(3) ((e_i0-e_d0)/(e_c0-e_d0))^alpha
  double hs_over_n = 0;

  static ParamConstants from(const HypoParams& p);
};

/// Void limits and f_s/f_d evaluated together so the pressure power laws are
/// computed once per step. Requires trT < 0 and e inside the clamp band.
struct StateFactors {
  VoidLimits limits;
  double f_s = 0;
  double f_d = 0;
};

StateFactors state_factors(const HypoParams& p, const ParamConstants& c,
                           double e, double trT);

}  // namespace detail

}  // namespace hypocal
