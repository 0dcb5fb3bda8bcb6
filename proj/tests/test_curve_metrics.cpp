#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hypocal/curve_metrics.hpp"
#include "hypocal/reference.hpp"
#include "hypocal/rng.hpp"

using namespace hypocal;

namespace {

// analytic point-to-segment values
constexpr double kDiagDist = 0.070710678118654752;  // |0.5-0.6|/sqrt(2)

Eigen::MatrixX2d rotate90(const Eigen::MatrixX2d& pts) {
  Eigen::MatrixX2d out(pts.rows(), 2);
  out.col(0) = -pts.col(1);
  out.col(1) = pts.col(0);
  return out;
}

// experimental curves taken exactly from the trajectory vertices
ExperimentalTest exact_test(const TestSpec& spec, const HypoParams& p, int m) {
  return reference::sample_test(spec, "exact", p, m, 17);
}

}  // namespace

TEST_CASE("frechet_vector: points on the polyline have zero distance") {
  Eigen::MatrixX2d poly(4, 2);
  poly << 0, 0, 1, 1, 2, 0.5, 3, 2;
  const Eigen::VectorXd d = frechet_vector(poly, poly);
  CHECK(d.maxCoeff() == 0.0);
}

TEST_CASE("frechet_vector: analytic distances to a diagonal segment") {
  Eigen::MatrixX2d poly(2, 2);
  poly << 0, 0, 1, 1;
  Eigen::MatrixX2d pts(2, 2);
  pts << 0.5, 0.6,  // perpendicular foot inside the segment
      2.0, 1.0;     // clamps to the (1,1) endpoint
  const Eigen::VectorXd d = frechet_vector(pts, poly);
  CHECK(d[0] == doctest::Approx(kDiagDist).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frechet_vector is invariant under rigid 90-degree rotation") {
  Rng rng(211);
  Eigen::MatrixX2d poly(30, 2), pts(12, 2);
  for (int i = 0; i < poly.rows(); ++i) {
    poly(i, 0) = i / 29.0;
    poly(i, 1) = rng.uniform(-1.0, 1.0);
  }
  for (int i = 0; i < pts.rows(); ++i) {
    pts(i, 0) = rng.uniform(0.0, 1.0);
    pts(i, 1) = rng.uniform(-1.0, 1.0);
  }
  const Eigen::VectorXd base = frechet_vector(pts, poly);
  const Eigen::VectorXd rotated = frechet_vector(rotate90(pts), rotate90(poly));
  for (int i = 0; i < base.size(); ++i) CHECK(base[i] == rotated[i]);
}

TEST_CASE("frechet_vector: refining the polyline never increases distances") {
  Rng rng(213);
  Eigen::MatrixX2d poly(10, 2), pts(8, 2);
  for (int i = 0; i < poly.rows(); ++i) {
    poly(i, 0) = i / 9.0;
    poly(i, 1) = rng.uniform(-1.0, 1.0);
  }
  for (int i = 0; i < pts.rows(); ++i) {
    pts(i, 0) = rng.uniform(0.0, 1.0);
    pts(i, 1) = rng.uniform(-1.0, 1.0);
  }
  Eigen::MatrixX2d refined(19, 2);
  for (int i = 0; i < 9; ++i) {
    refined.row(2 * i) = poly.row(i);
    refined.row(2 * i + 1) = 0.5 * (poly.row(i) + poly.row(i + 1));
  }
  refined.row(18) = poly.row(9);

  const Eigen::VectorXd base = frechet_vector(pts, poly);
  const Eigen::VectorXd fine = frechet_vector(pts, refined);
  for (int i = 0; i < base.size(); ++i) CHECK(fine[i] <= base[i] + 1e-12);
}

TEST_CASE("frechet_vector rejects degenerate inputs") {
  Eigen::MatrixX2d poly(1, 2);
  poly << 0, 0;
  Eigen::MatrixX2d pts(1, 2);
  pts << 1, 1;
  CHECK_THROWS_AS(frechet_vector(pts, poly), DomainError);
  CHECK_THROWS_AS(frechet_vector(Eigen::MatrixX2d(0, 2), Eigen::MatrixX2d(2, 2)), DomainError);
}

TEST_CASE("scale_pair: identical curves scale identically") {
  const HypoParams truth = reference::synthetic_true_params().expand();
  const TestSpec triax = reference::synthetic_specs()[1];
  const ExperimentalTest test = exact_test(triax, truth, 101);
  const Trajectory traj = simulate(triax, truth);

  for (const Plane plane : {Plane::Deviatoric, Plane::Volumetric}) {
    const auto [exp_c, sim_c] = scale_pair(test, traj, plane);
    REQUIRE(exp_c.points.rows() == sim_c.points.rows());
    CHECK((exp_c.points - sim_c.points).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scale_pair: oedometer strain axis ends at one by construction") {
  const HypoParams truth = reference::synthetic_true_params().expand();
  const TestSpec oedo = reference::synthetic_specs()[0];
  const ExperimentalTest test = reference::sample_test(oedo, "EDO", truth, 15, 6);
  const Trajectory traj = simulate(oedo, truth);

  const auto [exp_c, sim_c] = scale_pair(test, traj, Plane::Oedometer);
  CHECK(exp_c.points(0, 0) == 0.0);
  CHECK(exp_c.points(exp_c.points.rows() - 1, 0) == 1.0);
  CHECK(exp_c.points.col(1).maxCoeff() == 1.0);
  CHECK(exp_c.points.col(0).maxCoeff() == 1.0);
  // simulated curve lands on the same normalizers up to discretization
  CHECK(sim_c.points(sim_c.points.rows() - 1, 0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("scale_pair: triaxial strain scaling is linear") {
  ExperimentalTest test;
  test.spec = TestSpec{TestKind::TriaxialDrained, ElementState{-50, -50, 0.6}, 0.0, 0.20};
  test.name = "t";
  test.deviatoric.resize(3, 2);
  test.deviatoric << 0.0, 0.0, 0.10, 80.0, 0.20, 100.0;
  test.volumetric.resize(3, 2);
  test.volumetric << 0.0, 0.0, 0.10, -0.01, 0.20, 0.02;

  Trajectory traj;
  traj.samples = {{0.0, -50, -50, 0.6}, {0.1, -120, -50, 0.59}, {0.2, -150, -50, 0.595}};

  const auto [dev_exp, dev_sim] = scale_pair(test, traj, Plane::Deviatoric);
  CHECK(dev_exp.points(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dev_exp.points(0, 0) == 0.0);
  CHECK(dev_exp.points(0, 1) == 0.0);
  CHECK(dev_exp.points(2, 1) == 1.0);

  // volumetric plane preserves the sign of eps_v
  const auto [vol_exp, vol_sim] = scale_pair(test, traj, Plane::Volumetric);
  CHECK(vol_exp.points(1, 1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(vol_exp.points(2, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(vol_exp.points.col(1).cwiseAbs().maxCoeff() == 1.0);
}

TEST_CASE("scale_pair reports degenerate normalizers") {
  ExperimentalTest test;
  test.spec = TestSpec{TestKind::TriaxialDrained, ElementState{-50, -50, 0.6}, 0.0, 0.20};
  test.deviatoric.resize(2, 2);
  test.deviatoric << 0.0, 0.0, 0.20, 0.0;  // flat q
  test.volumetric.resize(2, 2);
  test.volumetric << 0.0, 0.0, 0.20, 0.0;  // flat eps_v

  Trajectory traj;
  traj.samples = {{0.0, -50, -50, 0.6}, {0.2, -100, -50, 0.59}};
  CHECK_THROWS_AS(scale_pair(test, traj, Plane::Deviatoric), DegenerateNormalizer);
  CHECK_THROWS_AS(scale_pair(test, traj, Plane::Volumetric), DegenerateNormalizer);

  ExperimentalTest oedo;
  oedo.spec = TestSpec{TestKind::Oedometer, ElementState{-10, -10, 0.7}, 0.65, 0.0};
  oedo.oedometer.resize(2, 2);
  oedo.oedometer << -10.0, 0.7, -20.0, 0.7;  // no net compression
  CHECK_THROWS_AS(scale_pair(oedo, traj, Plane::Oedometer), DegenerateNormalizer);
}

TEST_CASE("cost: exact vertex data gives exactly zero") {
  const HypoParams truth = reference::synthetic_true_params().expand();
  ExperimentalDataset data;
  data.tests.push_back(exact_test(reference::synthetic_specs()[0], truth, 101));
  data.tests.push_back(exact_test(reference::synthetic_specs()[1], truth, 101));
  const double c = cost(reference::synthetic_true_params(), data, CostWeights{});
  CHECK(c == 0.0);
}

TEST_CASE("cost: bundled synthetic data at the generating parameters") {
  const ExperimentalDataset data = reference::synthetic_dataset();
  const auto detail = cost_detail(reference::synthetic_true_params(), data, CostWeights{});
  REQUIRE(detail.feasible);
  // rounding of the stored points keeps the floor near 2e-5
  CHECK(detail.total <= 1e-4);
  CHECK(detail.total >= 1e-6);
  CHECK(detail.deltas[0] > 0.0);
  CHECK(detail.deltas[1] > 0.0);
  CHECK(detail.deltas[2] > 0.0);
}

TEST_CASE("cost: weights select planes") {
  const ExperimentalDataset data = reference::synthetic_dataset();
  const SearchParams p = reference::synthetic_true_params();
  const auto detail = cost_detail(p, data, CostWeights{1.0, 1.0, 1.0});
  const double only_dev = cost(p, data, CostWeights{0.0, 1.0, 0.0});
  CHECK(only_dev == detail.deltas[1]);
  const double weighted = cost(p, data, CostWeights{2.0, 0.5, 1.0});
  CHECK(weighted == doctest::Approx(2.0 * detail.deltas[0] + 0.5 * detail.deltas[1] +
                                    detail.deltas[2]).epsilon(1e-15));
}

TEST_CASE("cost: infeasible parameter sets yield the infinity sentinel") {
  const ExperimentalDataset data = reference::synthetic_dataset();
  SearchParams p = reference::synthetic_true_params();
  p.e_c0 = 0.60;  // initial void ratio of EDO1 exceeds e_i
  CHECK(cost(p, data, CostWeights{}) == kInfeasibleCost);
  const auto detail = cost_detail(p, data, CostWeights{});
  CHECK_FALSE(detail.feasible);
}

TEST_CASE("cost: zero weights configuration is rejected") {
  const ExperimentalDataset data = reference::synthetic_dataset();
  CHECK_THROWS_AS(cost(reference::synthetic_true_params(), data, CostWeights{0, 0, 0}),
                  ConfigError);
  CHECK_THROWS_AS(cost(reference::synthetic_true_params(), data, CostWeights{-1, 1, 1}),
                  ConfigError);
}

TEST_CASE("cost is deterministic") {
  const ExperimentalDataset data = reference::synthetic_dataset();
  const SearchParams p = reference::synthetic_true_params();
  CHECK(cost(p, data, CostWeights{}) == cost(p, data, CostWeights{}));
}

TEST_CASE("dataset validation catches malformed curves") {
  ExperimentalDataset data = reference::synthetic_dataset();
  CHECK_NOTHROW(validate(data));

  data.tests[0].oedometer(3, 1) = 0.99;  // void ratio increases mid-path
  CHECK_THROWS_AS(validate(data), ValidationError);

  data = reference::synthetic_dataset();
  data.tests[0].oedometer(0, 0) = 5.0;  // tensile stress entry
  CHECK_THROWS_AS(validate(data), ValidationError);

  data = reference::synthetic_dataset();
  data.tests[1].deviatoric(4, 0) = 0.0;  // non-monotone strain
  CHECK_THROWS_AS(validate(data), ValidationError);

  data = reference::synthetic_dataset();
  data.tests[1].spec.n_step = 5;  // M > n_step + 1
  CHECK_THROWS_AS(validate(data), ValidationError);

  CHECK_THROWS_AS(validate(ExperimentalDataset{}), ValidationError);
}
