#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/LU>

#include "hypocal/element_sim.hpp"
#include "hypocal/reference.hpp"
#include "hypocal/rng.hpp"
#include "hypocal/sh_core.hpp"

using namespace hypocal;

namespace {

constexpr double kTfOedo = 0.0293276151;  // -ln(1 - (0.730-0.680)/1.730)

// independent evaluation of the axisymmetric stress rates in their original
// bracketed form, used as the oracle for the L/N assembly
void direct_rates(const ElementState& s, const HypoParams& p, double D1, double D2,
                  double& T1_dot, double& T2_dot) {
  const double T1 = s.T1, T2 = s.T2;
  const double trT = T1 + 2.0 * T2;
  const double fs = stiffness_fs(p, s.e, trT);
  const double fd = pykno_fd(s.e, void_limits(p, trT), p.alpha);
  const double a = coeff_a(p.phi_c);
  const double c = trT * trT / (T1 * T1 + 2.0 * T2 * T2);
  const double x = std::sqrt(D1 * D1 + 2.0 * D2 * D2);
  const double mixed = (T1 * D1 + 2.0 * T2 * D2) / (trT * trT);
  T1_dot = fs * c *
           (D1 + a * a * mixed * T1 + fd * (a / 3.0) * ((5.0 * T1 - 2.0 * T2) / trT) * x);
  T2_dot = fs * c *
           (D2 + a * a * mixed * T2 + fd * (a / 3.0) * ((4.0 * T2 - T1) / trT) * x);
}

ElementState random_compressive_state(const HypoParams& p, Rng& rng) {
  ElementState s;
  s.T2 = -rng.uniform(5.0, 400.0);
  s.T1 = s.T2 * rng.uniform(1.0, 2.5);
  const VoidLimits lim = void_limits(p, s.trace());
  s.e = rng.uniform(lim.e_d, lim.e_i);
  return s;
}

HypoParams random_params(Rng& rng) {
  HypoParams p;
  p.phi_c = deg_to_rad(rng.uniform(25.0, 40.0));
  p.h_s = rng.uniform(1e6, 9e6);
  p.n = rng.uniform(0.25, 0.40);
  p.e_c0 = rng.uniform(0.7, 1.1);
  p.e_d0 = p.e_c0 * 0.60;
  p.e_i0 = p.e_c0 * 1.20;
  p.alpha = rng.uniform(0.05, 0.20);
  p.beta = rng.uniform(1.0, 2.0);
  return p;
}

}  // namespace

TEST_CASE("axisym_rates: isotropic states have N1 = N2") {
  const auto r = axisym_rates(ElementState{-100.0, -100.0, 0.7},
                              reference::wolffersdorff_params());
  CHECK(r.N[0] == doctest::Approx(r.N[1]).epsilon(1e-15));
  CHECK(r.N[0] / r.N[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("axisym_rates: L/N assembly reproduces the bracketed equations") {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const HypoParams p = random_params(rng);
    const ElementState s = random_compressive_state(p, rng);
    const double D1 = rng.uniform(-2.0, 2.0);
    const double D2 = rng.uniform(-2.0, 2.0);

    const AxisymRates ax = axisym_rates(s, p);
    const double x = std::sqrt(D1 * D1 + 2.0 * D2 * D2);
    const double T1_ln = ax.f_s * (ax.L(0, 0) * D1 + ax.L(0, 1) * D2 + ax.f_d * ax.N[0] * x);
    const double T2_ln = ax.f_s * (ax.L(1, 0) * D1 + ax.L(1, 1) * D2 + ax.f_d * ax.N[1] * x);

    double T1_direct, T2_direct;
    direct_rates(s, p, D1, D2, T1_direct, T2_direct);
    const double scale = std::max({1.0, std::abs(T1_direct), std::abs(T2_direct)});
    CHECK(std::abs(T1_ln - T1_direct) <= 1e-12 * scale);
    CHECK(std::abs(T2_ln - T2_direct) <= 1e-12 * scale);
  }
}

TEST_CASE("axisym_rates: L is nonsingular for admissible states") {
  Rng rng(103);
  for (int i = 0; i < 500; ++i) {
    const HypoParams p = random_params(rng);
    const ElementState s = random_compressive_state(p, rng);
    const auto r = axisym_rates(s, p);
    CHECK(std::abs(r.L.determinant()) > 1e-12);
  }
}

TEST_CASE("axisym_rates at the reference triaxial initial state") {
  const auto r = axisym_rates(ElementState{-300.0, -300.0, 0.660},
                              reference::wolffersdorff_params());
  CHECK(std::isfinite(r.L.norm()));
  CHECK(std::isfinite(r.N.norm()));
  CHECK(r.f_s > 0.0);
  CHECK(r.f_d > 0.0);
}

TEST_CASE("axisym_rates rejects inadmissible states") {
  const auto p = reference::wolffersdorff_params();
  CHECK_THROWS_AS(axisym_rates(ElementState{100.0, 100.0, 0.7}, p), AdmissibilityError);
  CHECK_THROWS_AS(axisym_rates(ElementState{-100.0, -100.0, 2.0}, p), AdmissibilityError);
}

TEST_CASE("oedometer_rate: continuity gives e_dot = -(1+e) exactly") {
  const auto p = reference::wolffersdorff_params();
  const auto r = oedometer_rate(ElementState{-10.0, -10.0, 0.730}, p);
  CHECK(r.e_dot == -(1.0 + 0.730));
  const auto r2 = oedometer_rate(ElementState{-321.0, -123.0, 0.691}, p);
  CHECK(r2.e_dot == -(1.0 + 0.691));
}

TEST_CASE("oedometer trajectory: e strictly decreasing, loading monotone") {
  const Trajectory traj =
      simulate(reference::validation_oedometer(), reference::wolffersdorff_params());
  REQUIRE(traj.size() == 101);
  for (int i = 1; i < traj.size(); ++i) {
    CHECK(traj.samples[i].e < traj.samples[i - 1].e);
    CHECK(-traj.samples[i].T1 > -traj.samples[i - 1].T1);
  }
}

TEST_CASE("triaxial_rate satisfies the constraint quadratic and norm identity") {
  Rng rng(107);
  int checked = 0;
  while (checked < 1000) {
    const HypoParams p = random_params(rng);
    const ElementState s = random_compressive_state(p, rng);
    TriaxialRate tr;
    try {
      tr = triaxial_rate(s, p);
    } catch (const NonUniqueRootError&) {
      continue;  // excluded state: nothing to verify
    }
    ++checked;

    // residual of the quadratic assembled independently from the rates
    const AxisymRates ax = axisym_rates(s, p);
    const double L21 = ax.L(1, 0), L22 = ax.L(1, 1), N2 = ax.N[1];
    const double A = L22 * L22 - 2.0 * ax.f_d * ax.f_d * N2 * N2;
    const double B = -4.0 * ax.f_d * N2 * L21 * kReferenceD1;
    const double C = -(2.0 * L21 * L21 + L22 * L22);
    const double quad = A * tr.x * tr.x + B * tr.x + C;
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    CHECK(std::abs(quad) <= 1e-10 * scale);
    CHECK(std::abs(tr.x - std::sqrt(1.0 + 2.0 * tr.D2 * tr.D2)) <= 1e-10);
    CHECK(std::abs(tr.residual) <= 1e-9);
  }
}

TEST_CASE("triaxial_rate root matches brute-force candidate filtering") {
  Rng rng(109);
  for (int i = 0; i < 1000; ++i) {
    const HypoParams p = random_params(rng);
    const ElementState s = random_compressive_state(p, rng);
    const AxisymRates ax = axisym_rates(s, p);
    const double L21 = ax.L(1, 0), L22 = ax.L(1, 1), N2 = ax.N[1];
    const double A = L22 * L22 - 2.0 * ax.f_d * ax.f_d * N2 * N2;
    const double B = -4.0 * ax.f_d * N2 * L21 * kReferenceD1;
    const double C = -(2.0 * L21 * L21 + L22 * L22);
    const double disc = B * B - 4.0 * A * C;

    std::vector<double> positive;
    if (disc >= 0.0 && A != 0.0) {
      for (const double root :
           {(-B + std::sqrt(disc)) / (2.0 * A), (-B - std::sqrt(disc)) / (2.0 * A)})
        if (root > 1e-12) positive.push_back(root);
    }

    if (positive.size() == 1) {
      const TriaxialRate tr = triaxial_rate(s, p);
      CHECK(tr.x == doctest::Approx(positive.front()).epsilon(1e-9));
    } else {
      CHECK_THROWS_AS(triaxial_rate(s, p), NonUniqueRootError);
    }
  }
}

TEST_CASE("triaxial_rate rejects states without a unique positive root") {
  // extreme anisotropy near the loose limit: both quadratic roots negative
  CHECK_THROWS_AS(
      triaxial_rate(ElementState{-10.0, -0.2, 0.944}, reference::wolffersdorff_params()),
      NonUniqueRootError);
}

TEST_CASE("integration_time formulas and edge cases") {
  TestSpec oedo = reference::validation_oedometer();
  CHECK(integration_time(oedo) == doctest::Approx(kTfOedo).epsilon(1e-8));

  TestSpec triax = reference::validation_triaxial();
  triax.eps_fin = 0.20;
  CHECK(integration_time(triax) == 0.20);

  oedo.e_fin = oedo.initial.e;  // zero deformation
  CHECK(integration_time(oedo) == 0.0);

  oedo.e_fin = oedo.initial.e + 0.01;
  CHECK_THROWS_AS(integration_time(oedo), DomainError);
  triax.eps_fin = -0.1;
  CHECK_THROWS_AS(integration_time(triax), DomainError);
}

TEST_CASE("simulate: oedometer reference run hits the target void ratio") {
  const Trajectory traj =
      simulate(reference::validation_oedometer(), reference::wolffersdorff_params());
  REQUIRE(traj.size() == 101);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.front().e == 0.730);
  // final e within one Euler step of the continuity solution
  CHECK(std::abs(traj.samples.back().e - 0.680) < 1e-4);
  CHECK(traj.samples.back().e == doctest::Approx(0.680).epsilon(2e-5));
  for (const auto& s : traj.samples) CHECK(s.T1 + 2.0 * s.T2 < 0.0);
}

TEST_CASE("simulate: synthetic triaxial test runs to full deformation") {
  const HypoParams truth = reference::synthetic_true_params().expand();
  const TestSpec spec = reference::synthetic_specs()[1];  // TxD1 (-50, -50, 0.524)
  const Trajectory traj = simulate(spec, truth);
  REQUIRE(traj.size() == 101);
  CHECK(traj.samples.back().t == doctest::Approx(0.20).epsilon(1e-15));
  CHECK(traj.q(0) == 0.0);
  CHECK(traj.eps_v(0) == 0.0);
}

TEST_CASE("simulate: triaxial constraint residual and radial drift stay small") {
  const Trajectory traj =
      simulate(reference::validation_triaxial(), reference::wolffersdorff_params());
  const auto params = reference::wolffersdorff_params();
  const double T2_0 = traj.samples.front().T2;
  for (int i = 0; i < traj.size(); ++i) {
    CHECK(std::abs(traj.samples[i].T2 - T2_0) <= 1e-3 * std::abs(T2_0));
    if (i + 1 < traj.size()) {
      const TriaxialRate r = triaxial_rate(
          ElementState{traj.samples[i].T1, traj.samples[i].T2, traj.samples[i].e}, params);
      CHECK(std::abs(r.residual) <= 1e-9);  // |T2_dot| <= 1e-9 |f_s|
    }
  }
}

TEST_CASE("simulate: halving dt converges with observed order >= 0.9") {
  const auto params = reference::wolffersdorff_params();
  for (const TestSpec base :
       {reference::validation_oedometer(), reference::validation_triaxial()}) {
    std::vector<Eigen::Vector3d> finals;
    for (const int n : {100, 200, 400, 800}) {
      TestSpec spec = base;
      spec.n_step = n;
      const Trajectory traj = simulate(spec, params);
      const auto& last = traj.samples.back();
      finals.emplace_back(last.T1, last.T2, last.e);
    }
    const double d01 = (finals[0] - finals[1]).norm();
    const double d12 = (finals[1] - finals[2]).norm();
    const double d23 = (finals[2] - finals[3]).norm();
    CHECK(std::log2(d01 / d12) >= 0.9);
    CHECK(std::log2(d12 / d23) >= 0.9);
  }
}

TEST_CASE("simulate: zero-length test returns only the initial sample") {
  TestSpec spec = reference::validation_oedometer();
  spec.e_fin = spec.initial.e;
  const Trajectory traj = simulate(spec, reference::wolffersdorff_params());
  REQUIRE(traj.size() == 1);
  CHECK(traj.samples[0].t == 0.0);
  CHECK(traj.samples[0].T1 == spec.initial.T1);
  CHECK(traj.samples[0].e == spec.initial.e);
}

TEST_CASE("simulate: deterministic replay is bit-identical") {
  const auto params = reference::wolffersdorff_params();
  const Trajectory a = simulate(reference::validation_triaxial(), params);
  const Trajectory b = simulate(reference::validation_triaxial(), params);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.samples[i].T1 == b.samples[i].T1);
    CHECK(a.samples[i].T2 == b.samples[i].T2);
    CHECK(a.samples[i].e == b.samples[i].e);
  }
}

TEST_CASE("simulate: inadmissible initial states are rejected with the step and cause") {
  const auto params = reference::wolffersdorff_params();

  TestSpec spec = reference::validation_oedometer();
  spec.initial = ElementState{-10.0, -10.0, 1.2};  // above e_i
  StepFailure failure;
  CHECK(!try_simulate(spec, params, &failure).has_value());
  CHECK(failure.step == 0);
  CHECK(failure.reason == RejectReason::VoidRatioAboveMax);
  CHECK_THROWS_AS(simulate(spec, params), SimulationRejected);

  spec.initial = ElementState{10.0, 10.0, 0.7};
  CHECK(!try_simulate(spec, params, &failure).has_value());
  CHECK(failure.reason == RejectReason::PositiveTrace);

  spec.initial = ElementState{-10.0, -10.0, 0.2};  // below e_d
  spec.e_fin = 0.15;
  CHECK(!try_simulate(spec, params, &failure).has_value());
  CHECK(failure.reason == RejectReason::VoidRatioBelowMin);

  try {
    simulate(spec, params);
    CHECK(false);
  } catch (const SimulationRejected& e) {
    CHECK(e.step() == 0);
    CHECK(e.reason() == RejectReason::VoidRatioBelowMin);
  }
}

TEST_CASE("trajectory derived observables") {
  const Trajectory traj =
      simulate(reference::validation_triaxial(), reference::wolffersdorff_params());
  CHECK(traj.e0() == 0.660);
  for (int i = 0; i < traj.size(); ++i) {
    CHECK(traj.eps_a(i) == traj.samples[i].t);
    CHECK(traj.q(i) == traj.samples[i].T2 - traj.samples[i].T1);
  }
  CHECK(traj.q(traj.size() - 1) > 0.0);
}
