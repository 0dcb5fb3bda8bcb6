#pragma once

#include <string>
#include <vector>

#include "hypocal/curve_metrics.hpp"
#include "hypocal/ga.hpp"
#include "hypocal/types.hpp"

namespace hypocal::reference {

/// Hochstetten sand, von Wolffersdorff's calibration:
/// phi_c 33 deg, h_s 1e6 kPa, n 0.25, e_d0 0.55, e_c0 0.95, e_i0 1.05,
/// alpha 0.25, beta 1.5.
HypoParams wolffersdorff_params();

/// Hochstetten sand, Herle & Gudehus: h_s 1.5e6 kPa, n 0.28, beta 1.0,
/// otherwise as above.
HypoParams herle_gudehus_params();

/// Hochstetten sand, GA-calibrated set used to synthesize the bundled
/// dataset: phi_c 32.73 deg, h_s 1.32e6 kPa, n 0.23, e_c0 1.04, alpha 0.23,
/// beta 1.26, with e_d0/e_i0 completed through the 0.60/1.20 ratios.
HypoParams ga_calibration_params();

/// Validation element tests for the reference parameters: oedometer from
/// (-10, -10, 0.730) to e_fin = 0.680, triaxial from (-300, -300, 0.660) to
/// eps_fin = 0.11.
TestSpec validation_oedometer();
TestSpec validation_triaxial();

/// Synthetic benchmark: the generating parameter set
/// (34 deg, 3.8e6 kPa, 0.30, 0.886, 0.144, 1.5) with lambda_d = 0.60,
/// lambda_i = 1.20.
SearchParams synthetic_true_params();

/// One oedometer + three triaxial tests (EDO1, TxD1..TxD3) with the
/// benchmark initial conditions; eps_fin = 0.20, e_fin = 0.720.
std::vector<TestSpec> synthetic_specs();

/// GA settings for the synthetic benchmark: N_i = 500, N_I = 20, default
/// operator fractions, unit weights, search box
/// [25, 40] deg x [1, 9] GPa x [0.25, 0.40] x [0.6, 1.1] x [0.05, 0.20] x [1, 2].
GaConfig synthetic_ga_config();

/// Synthetic experimental data: 15 oedometer points and 10 points per
/// triaxial curve, sampled at equally spaced vertices of the n_step = 100
/// integration of the true parameters and stored with 6 significant digits.
ExperimentalDataset synthetic_dataset();

/// Hochstetten calibration setup: two oedometer and three drained triaxial
/// tests; same search box as the synthetic benchmark except beta >= 0.9,
/// N_I = 10.
std::vector<TestSpec> hochstetten_specs();
GaConfig hochstetten_ga_config();

/// Bundled Hochstetten dataset: response of ga_calibration_params() sampled
/// at 12 (oedometer) / 15 (triaxial) points with small fixed-seed
/// digitization noise on the measured quantities. See data/hochstetten.
ExperimentalDataset hochstetten_dataset();

/// Rounds through the "%.{digits}g" text form used by the bundled files.
double round_sig(double value, int digits);

/// Samples a simulated test into experimental curves at m equally spaced
/// trajectory vertices (endpoints included), rounded to sig_digits.
ExperimentalTest sample_test(const TestSpec& spec, const std::string& name,
                             const HypoParams& params, int m_points, int sig_digits);

}  // namespace hypocal::reference
