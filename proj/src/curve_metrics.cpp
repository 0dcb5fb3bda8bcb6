#include "hypocal/curve_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace hypocal {

namespace {

// axial log strain magnitude accumulated while compressing from e0 to e
double eps_E(double e, double e0) { return std::log((1.0 + e0) / (1.0 + e)); }

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double d : v) s += d * d;
  return std::sqrt(s);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void check_strain_column(const Eigen::MatrixX2d& curve, const std::string& where) {
  for (int i = 1; i < curve.rows(); ++i)
    require(curve(i, 0) >= curve(i - 1, 0), where + ": eps_a must be non-decreasing");
}

}  // namespace

int ExperimentalDataset::count(TestKind kind) const {
  int n = 0;
  for (const auto& t : tests)
    if (t.spec.kind == kind) ++n;
  return n;
}

void validate(const ExperimentalDataset& data) {
  require(!data.tests.empty(), "dataset has no tests");
  for (const auto& t : data.tests) {
    validate(t.spec);
    const int max_points = t.spec.n_step + 1;
    if (t.spec.kind == TestKind::Oedometer) {
      require(t.oedometer.rows() >= 2, t.name + ": oedometer curve needs >= 2 points");
      require(t.oedometer.rows() <= max_points,
              t.name + ": more experimental points than polyline vertices");
      for (int i = 0; i < t.oedometer.rows(); ++i)
        require(t.oedometer(i, 0) < 0.0, t.name + ": positive stress trace in oedometer data");
      for (int i = 1; i < t.oedometer.rows(); ++i)
        require(t.oedometer(i, 1) <= t.oedometer(i - 1, 1),
                t.name + ": void ratio must not increase along the load path");
      require(t.oedometer(t.oedometer.rows() - 1, 1) < t.oedometer(0, 1),
              t.name + ": oedometer curve shows no compression");
    } else {
      require(t.deviatoric.rows() >= 2, t.name + ": deviatoric curve needs >= 2 points");
      require(t.volumetric.rows() >= 2, t.name + ": volumetric curve needs >= 2 points");
      require(t.deviatoric.rows() <= max_points && t.volumetric.rows() <= max_points,
              t.name + ": more experimental points than polyline vertices");
      check_strain_column(t.deviatoric, t.name + " deviatoric");
      check_strain_column(t.volumetric, t.name + " volumetric");
    }
  }
}

void validate(const CostWeights& w) {
  if (w.w1 < 0.0 || w.w2 < 0.0 || w.w3 < 0.0)
    throw ConfigError("cost weights must be non-negative");
  if (!(w.w1 > 0.0 || w.w2 > 0.0 || w.w3 > 0.0))
    throw ConfigError("at least one cost weight must be positive");
}

std::pair<ScaledCurve, ScaledCurve> scale_pair(const ExperimentalTest& test,
                                               const Trajectory& trajectory,
                                               Plane plane) {
  ScaledCurve exp_curve{.points = {}, .plane = plane};
  ScaledCurve sim_curve{.points = {}, .plane = plane};
  const int n_sim = trajectory.size();

  if (plane == Plane::Oedometer) {
    const Eigen::MatrixX2d& raw = test.oedometer;
    const double e0 = test.spec.initial.e;
    const double e_ref = raw(raw.rows() - 1, 1);  // final experimental void ratio
    const double x_denom = eps_E(e_ref, e0);
    if (!(x_denom > 0.0))
      throw DegenerateNormalizer("oedometer curve has no net compression (e_fin >= e_0)");
    const double min_mag = -raw.col(0).maxCoeff();  // least compressive entry
    if (!(min_mag > 0.0))
      throw DegenerateNormalizer("oedometer stresses must be strictly compressive");
    const double stress_scale = -raw.col(0).minCoeff();  // peak |T1|

    exp_curve.points.resize(raw.rows(), 2);
    for (int i = 0; i < raw.rows(); ++i) {
      exp_curve.points(i, 0) = eps_E(raw(i, 1), e0) / x_denom;
      exp_curve.points(i, 1) = -raw(i, 0) / stress_scale;
    }
    sim_curve.points.resize(n_sim, 2);
    for (int i = 0; i < n_sim; ++i) {
      sim_curve.points(i, 0) = eps_E(trajectory.samples[i].e, e0) / x_denom;
      sim_curve.points(i, 1) = -trajectory.samples[i].T1 / stress_scale;
    }
    return {std::move(exp_curve), std::move(sim_curve)};
  }

  const Eigen::MatrixX2d& raw =
      plane == Plane::Deviatoric ? test.deviatoric : test.volumetric;
  const double x_scale = raw.col(0).maxCoeff();
  if (!(x_scale > 0.0)) throw DegenerateNormalizer("experimental eps_a range is zero");
  double y_scale;
  if (plane == Plane::Deviatoric) {
    y_scale = raw.col(1).maxCoeff();
    if (!(y_scale > 0.0)) throw DegenerateNormalizer("max q over the experimental curve is zero");
  } else {
    y_scale = raw.col(1).cwiseAbs().maxCoeff();  // sign of eps_v is preserved
    if (!(y_scale > 0.0)) throw DegenerateNormalizer("max |eps_v| over the experimental curve is zero");
  }

  exp_curve.points.resize(raw.rows(), 2);
  exp_curve.points.col(0) = raw.col(0) / x_scale;
  exp_curve.points.col(1) = raw.col(1) / y_scale;

  sim_curve.points.resize(n_sim, 2);
  for (int i = 0; i < n_sim; ++i) {
    sim_curve.points(i, 0) = trajectory.eps_a(i) / x_scale;
    sim_curve.points(i, 1) =
        (plane == Plane::Deviatoric ? trajectory.q(i) : trajectory.eps_v(i)) / y_scale;
  }
  return {std::move(exp_curve), std::move(sim_curve)};
}

Eigen::VectorXd frechet_vector(const Eigen::MatrixX2d& points,
                               const Eigen::MatrixX2d& polyline) {
  const int m = static_cast<int>(points.rows());
  const int n = static_cast<int>(polyline.rows());
  if (m < 1) throw DomainError("frechet_vector needs at least one point");
  if (n < 2) throw DomainError("frechet_vector needs a polyline with >= 2 vertices");

  Eigen::VectorXd out(m);
  for (int k = 0; k < m; ++k) {
    const Eigen::Vector2d p = points.row(k).transpose();
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < n; ++j) {
      const Eigen::Vector2d a = polyline.row(j).transpose();
      const Eigen::Vector2d ab = polyline.row(j + 1).transpose() - a;
      const double len2 = ab.squaredNorm();
      double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, (p - (a + t * ab)).squaredNorm());
    }
    out[k] = std::sqrt(best);
  }
  return out;
}

CostBreakdown cost_detail(const SearchParams& params, const ExperimentalDataset& data,
                          const CostWeights& weights) {
  validate(weights);
  CostBreakdown out;

  const HypoParams expanded = params.expand();
  if (!is_valid(expanded)) return out;  // infeasible sentinel

  std::array<std::vector<double>, 3> dists;
  for (const auto& test : data.tests) {
    const auto traj = try_simulate(test.spec, expanded);
    if (!traj) return out;
    if (test.spec.kind == TestKind::Oedometer) {
      const auto [exp_c, sim_c] = scale_pair(test, *traj, Plane::Oedometer);
      const Eigen::VectorXd d = frechet_vector(exp_c.points, sim_c.points);
      dists[0].insert(dists[0].end(), d.begin(), d.end());
    } else {
      const auto [exp_q, sim_q] = scale_pair(test, *traj, Plane::Deviatoric);
      const Eigen::VectorXd dq = frechet_vector(exp_q.points, sim_q.points);
      dists[1].insert(dists[1].end(), dq.begin(), dq.end());
      const auto [exp_v, sim_v] = scale_pair(test, *traj, Plane::Volumetric);
      const Eigen::VectorXd dv = frechet_vector(exp_v.points, sim_v.points);
      dists[2].insert(dists[2].end(), dv.begin(), dv.end());
    }
  }

  for (int i = 0; i < 3; ++i) out.deltas[i] = l2_norm(dists[i]);
  out.total = weights.w1 * out.deltas[0] + weights.w2 * out.deltas[1] +
              weights.w3 * out.deltas[2];
  out.feasible = true;
  return out;
}

double cost(const SearchParams& params, const ExperimentalDataset& data,
            const CostWeights& weights) {
  return cost_detail(params, data, weights).total;
}

}  // namespace hypocal
