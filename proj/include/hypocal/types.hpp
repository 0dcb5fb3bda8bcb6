#pragma once

#include <Eigen/Core>

namespace hypocal {

/// Free search-space coordinates, in fixed order: (phi_c, h_s, n, e_c0, alpha, beta).
using ParamVector = Eigen::Matrix<double, 6, 1>;

inline constexpr int kNumSearchParams = 6;

inline constexpr const char* kParamNames[kNumSearchParams] = {
    "phi_c", "h_s", "n", "e_c0", "alpha", "beta"};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Full parameter set of the sand hypoplasticity law.
///
/// Units: phi_c in radians (degrees only at I/O boundaries), h_s in kPa,
/// everything else dimensionless. Stresses are negative in compression.
struct HypoParams {
  double phi_c;  ///< critical friction angle
  double h_s;    ///< granular hardness (pressure scale of Bauer's law)
  double n;      ///< barotropy exponent, 0 < n < 1
  double e_d0;   ///< minimal void ratio at zero pressure
  double e_c0;   ///< critical void ratio at zero pressure
  double e_i0;   ///< maximal void ratio at zero pressure
  double alpha;  ///< pyknotropy exponent
  double beta;   ///< stiffness exponent
};

bool is_valid(const HypoParams& p) noexcept;
void validate(const HypoParams& p);  // throws DomainError

/// Reduced parameter set the optimizer acts on: e_d0 and e_i0 track e_c0
/// through the fixed ratios lambda_d = e_d0/e_c0 and lambda_i = e_i0/e_c0.
struct SearchParams {
  double phi_c = 0;
  double h_s = 0;
  double n = 0;
  double e_c0 = 0;
  double alpha = 0;
  double beta = 0;
  double lambda_d = 0.60;
  double lambda_i = 1.20;

  HypoParams expand() const;
  ParamVector free_values() const;
  static SearchParams from_vector(const ParamVector& v, double lambda_d, double lambda_i);
};

void validate(const SearchParams& p);

/// Ratios recovered from a full parameter set, for cost evaluation of
/// published calibrations.
SearchParams to_search(const HypoParams& p);

/// Axisymmetric element state: axial stress T1, radial stress T2 (kPa,
/// compression negative) and void ratio e.
struct ElementState {
  double T1 = 0;
  double T2 = 0;
  double e = 0;

  double trace() const { return T1 + 2.0 * T2; }
};

/// Pressure-dependent void-ratio band, 0 < e_d < e_c < e_i.
struct VoidLimits {
  double e_d = 0;
  double e_c = 0;
  double e_i = 0;
};

}  // namespace hypocal
