#include "hypocal/reference.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "hypocal/rng.hpp"

namespace hypocal::reference {

namespace {

// fixed stream for the synthesized digitization noise of the bundled
// Hochstetten dataset
constexpr std::uint64_t kDigitizationNoiseSeed = 1996;
constexpr double kStressNoise = 0.01;  // relative, on T1 and q
constexpr double kVolumeNoise = 0.01;  // relative to max |eps_v|

std::vector<int> sample_indices(int n_vertices, int m_points) {
  std::vector<int> idx(m_points);
  for (int j = 0; j < m_points; ++j) {
    idx[j] = static_cast<int>(
        std::lround(static_cast<double>(j) * (n_vertices - 1) / (m_points - 1)));
  }
  return idx;
}

}  // namespace

double round_sig(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

HypoParams wolffersdorff_params() {
  return HypoParams{deg_to_rad(33.0), 1.0e6, 0.25, 0.55, 0.95, 1.05, 0.25, 1.5};
}

HypoParams herle_gudehus_params() {
  return HypoParams{deg_to_rad(33.0), 1.5e6, 0.28, 0.55, 0.95, 1.05, 0.25, 1.0};
}

HypoParams ga_calibration_params() {
  // published best-fit set projected onto the calibration search space
  // (n and alpha sit at box edges) with void-ratio limits completed through
  // the 0.60/1.20 ratios
  return HypoParams{deg_to_rad(32.73), 1.32e6, 0.25, 0.624, 1.04, 1.248, 0.20, 1.26};
}

TestSpec validation_oedometer() {
  return TestSpec{TestKind::Oedometer, ElementState{-10.0, -10.0, 0.730}, 0.680, 0.0};
}

TestSpec validation_triaxial() {
  return TestSpec{TestKind::TriaxialDrained, ElementState{-300.0, -300.0, 0.660}, 0.0, 0.11};
}

SearchParams synthetic_true_params() {
  SearchParams p;
  p.phi_c = deg_to_rad(34.0);
  p.h_s = 3.8e6;
  p.n = 0.30;
  p.e_c0 = 0.886;
  p.alpha = 0.144;
  p.beta = 1.5;
  p.lambda_d = 0.60;
  p.lambda_i = 1.20;
  return p;
}

std::vector<TestSpec> synthetic_specs() {
  return {
      TestSpec{TestKind::Oedometer, ElementState{-8.0, -4.0, 0.784}, 0.720, 0.0},
      TestSpec{TestKind::TriaxialDrained, ElementState{-50.0, -50.0, 0.524}, 0.0, 0.20},
      TestSpec{TestKind::TriaxialDrained, ElementState{-100.0, -100.0, 0.545}, 0.0, 0.20},
      TestSpec{TestKind::TriaxialDrained, ElementState{-200.0, -200.0, 0.588}, 0.0, 0.20},
  };
}

GaConfig synthetic_ga_config() {
  GaConfig cfg;
  cfg.n_individuals = 500;
  cfg.n_iterations = 20;
  cfg.bounds_min << deg_to_rad(25.0), 1.0e6, 0.25, 0.6, 0.05, 1.0;
  cfg.bounds_max << deg_to_rad(40.0), 9.0e6, 0.40, 1.1, 0.20, 2.0;
  cfg.lambda_d = 0.60;
  cfg.lambda_i = 1.20;
  return cfg;
}

ExperimentalTest sample_test(const TestSpec& spec, const std::string& name,
                             const HypoParams& params, int m_points, int sig_digits) {
  const Trajectory traj = simulate(spec, params);
  const auto idx = sample_indices(traj.size(), m_points);

  ExperimentalTest test;
  test.spec = spec;
  test.name = name;
  if (spec.kind == TestKind::Oedometer) {
    test.oedometer.resize(m_points, 2);
    for (int j = 0; j < m_points; ++j) {
      test.oedometer(j, 0) = round_sig(traj.samples[idx[j]].T1, sig_digits);
      test.oedometer(j, 1) = round_sig(traj.samples[idx[j]].e, sig_digits);
    }
  } else {
    test.deviatoric.resize(m_points, 2);
    test.volumetric.resize(m_points, 2);
    for (int j = 0; j < m_points; ++j) {
      test.deviatoric(j, 0) = round_sig(traj.eps_a(idx[j]), sig_digits);
      test.deviatoric(j, 1) = round_sig(traj.q(idx[j]), sig_digits);
      test.volumetric(j, 0) = round_sig(traj.eps_a(idx[j]), sig_digits);
      test.volumetric(j, 1) = round_sig(traj.eps_v(idx[j]), sig_digits);
    }
  }
  return test;
}

ExperimentalDataset synthetic_dataset() {
  const HypoParams truth = synthetic_true_params().expand();
  const auto specs = synthetic_specs();
  ExperimentalDataset data;
  data.tests.push_back(sample_test(specs[0], "EDO1", truth, 15, 6));
  data.tests.push_back(sample_test(specs[1], "TxD1", truth, 10, 6));
  data.tests.push_back(sample_test(specs[2], "TxD2", truth, 10, 6));
  data.tests.push_back(sample_test(specs[3], "TxD3", truth, 10, 6));
  validate(data);
  return data;
}

std::vector<TestSpec> hochstetten_specs() {
  return {
      TestSpec{TestKind::Oedometer, ElementState{-25.0, -12.5, 0.730}, 0.672, 0.0},
      TestSpec{TestKind::Oedometer, ElementState{-25.0, -12.5, 0.695}, 0.643, 0.0},
      TestSpec{TestKind::TriaxialDrained, ElementState{-100.0, -100.0, 0.690}, 0.0, 0.20},
      TestSpec{TestKind::TriaxialDrained, ElementState{-200.0, -200.0, 0.670}, 0.0, 0.20},
      TestSpec{TestKind::TriaxialDrained, ElementState{-300.0, -300.0, 0.660}, 0.0, 0.20},
  };
}

GaConfig hochstetten_ga_config() {
  GaConfig cfg = synthetic_ga_config();
  cfg.n_iterations = 10;
  cfg.bounds_min[5] = 0.9;  // beta
  return cfg;
}

ExperimentalDataset hochstetten_dataset() {
  const HypoParams source = ga_calibration_params();
  const auto specs = hochstetten_specs();
  const char* names[] = {"EDO1", "EDO2", "TxD1", "TxD2", "TxD3"};

  Rng noise(kDigitizationNoiseSeed);
  ExperimentalDataset data;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const bool oedometric = specs[i].kind == TestKind::Oedometer;
    ExperimentalTest test = sample_test(specs[i], names[i], source, oedometric ? 12 : 15, 12);
    if (oedometric) {
      for (int j = 0; j < test.oedometer.rows(); ++j) {
        test.oedometer(j, 0) =
            round_sig(test.oedometer(j, 0) * (1.0 + kStressNoise * noise.normal()), 6);
        test.oedometer(j, 1) = round_sig(test.oedometer(j, 1), 6);
      }
    } else {
      const double ev_scale = test.volumetric.col(1).cwiseAbs().maxCoeff();
      for (int j = 0; j < test.deviatoric.rows(); ++j) {
        test.deviatoric(j, 0) = round_sig(test.deviatoric(j, 0), 6);
        test.deviatoric(j, 1) =
            round_sig(test.deviatoric(j, 1) * (1.0 + kStressNoise * noise.normal()), 6);
        test.volumetric(j, 0) = round_sig(test.volumetric(j, 0), 6);
        // the (0, 0) anchor of the volumetric curve is kept exact
        const double dv = j == 0 ? 0.0 : kVolumeNoise * ev_scale * noise.normal();
        test.volumetric(j, 1) = round_sig(test.volumetric(j, 1) + dv, 6);
      }
    }
    data.tests.push_back(std::move(test));
  }
  validate(data);
  return data;
}

}  // namespace hypocal::reference
