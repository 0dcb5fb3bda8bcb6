#include "hypocal/sh_core.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace hypocal {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrt3 = 1.73205080756887729353;
constexpr double kSqrt6 = 2.44948974967590663860;

// Tolerance for detecting hydrostatic / axisymmetric-compressive stress
// directions, applied to the normalized deviator (entries are O(1)).
constexpr double kAxisymTol = 1e-10;

}  // namespace

bool is_valid(const HypoParams& p) noexcept {
  if (!(p.phi_c > 0.0 && p.phi_c < kPi / 2.0)) return false;
  if (!(p.h_s > 0.0)) return false;
  if (!(p.n > 0.0 && p.n < 1.0)) return false;
  if (!(p.e_d0 > 0.0 && p.e_d0 < p.e_c0 && p.e_c0 < p.e_i0)) return false;
  if (!(p.alpha > 0.0 && p.beta > 0.0)) return false;
  return true;
}

void validate(const HypoParams& p) {
  if (!(p.phi_c > 0.0 && p.phi_c < kPi / 2.0))
    throw DomainError("phi_c must lie in (0, pi/2)");
  if (!(p.h_s > 0.0)) throw DomainError("h_s must be positive");
  if (!(p.n > 0.0 && p.n < 1.0)) throw DomainError("n must lie in (0, 1)");
  if (!(p.e_d0 > 0.0 && p.e_d0 < p.e_c0 && p.e_c0 < p.e_i0))
    throw DomainError("void ratios must satisfy 0 < e_d0 < e_c0 < e_i0");
  if (!(p.alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(p.beta > 0.0)) throw DomainError("beta must be positive");
}

HypoParams SearchParams::expand() const {
  return HypoParams{phi_c, h_s, n, lambda_d * e_c0, e_c0, lambda_i * e_c0, alpha, beta};
}

ParamVector SearchParams::free_values() const {
  ParamVector v;
  v << phi_c, h_s, n, e_c0, alpha, beta;
  return v;
}

SearchParams SearchParams::from_vector(const ParamVector& v, double lambda_d,
                                       double lambda_i) {
  SearchParams p;
  p.phi_c = v[0];
  p.h_s = v[1];
  p.n = v[2];
  p.e_c0 = v[3];
  p.alpha = v[4];
  p.beta = v[5];
  p.lambda_d = lambda_d;
  p.lambda_i = lambda_i;
  return p;
}

void validate(const SearchParams& p) {
  if (!(p.lambda_d > 0.0 && p.lambda_d < 1.0 && p.lambda_i > 1.0))
    throw DomainError("ratios must satisfy 0 < lambda_d < 1 < lambda_i");
  validate(p.expand());
}

SearchParams to_search(const HypoParams& p) {
  validate(p);
  SearchParams s;
  s.phi_c = p.phi_c;
  s.h_s = p.h_s;
  s.n = p.n;
  s.e_c0 = p.e_c0;
  s.alpha = p.alpha;
  s.beta = p.beta;
  s.lambda_d = p.e_d0 / p.e_c0;
  s.lambda_i = p.e_i0 / p.e_c0;
  return s;
}

double coeff_a(double phi_c) {
  const double s = std::sin(phi_c);
  if (!(s > 0.0)) throw DomainError("coeff_a requires sin(phi_c) > 0");
  return kSqrt3 * (3.0 - s) / (2.0 * kSqrt2 * s);
}

double factor_F(const Eigen::Matrix3d& T) {
  const double trT = T.trace();
  if (!(trT < 0.0)) throw AdmissibilityError("factor_F requires tr(T) < 0");

  const Eigen::Matrix3d T_hat = T / trT;
  const Eigen::Matrix3d dev = T_hat - Eigen::Matrix3d::Identity() / 3.0;
  const double dev_norm = dev.norm();
  const double tan_psi = kSqrt3 * dev_norm;

  if (tan_psi < kAxisymTol) return 1.0;  // hydrostatic

  // Axisymmetric compression: eigenvalues (s, -s/2, -s/2) with s > 0. Project
  // onto that structure; if the deviator is within tolerance of its
  // projection, the general expression is the indeterminate form with limit 1.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(dev);
  const Eigen::Vector3d d = eig.eigenvalues();  // ascending
  const double s = (2.0 * d[2] - d[1] - d[0]) / 3.0;
  if (s > 0.0) {
    const Eigen::Vector3d proj(-0.5 * s, -0.5 * s, s);
    if ((d - proj).norm() < kAxisymTol) return 1.0;
  }

  const double tr_dev2 = dev.squaredNorm();
  const double tr_dev3 = (dev * dev * dev).trace();
  const double cos3t = -kSqrt6 * tr_dev3 / std::pow(tr_dev2, 1.5);

  const double t2 = tan_psi * tan_psi;
  const double denom = 2.0 + kSqrt2 * tan_psi * cos3t;
  if (!(denom > 0.0))
    throw DomainError("factor_F: stress direction outside the admissible cone");
  const double inside = t2 / 8.0 + (2.0 - t2) / denom;
  if (!(inside >= 0.0))
    throw DomainError("factor_F: stress direction outside the admissible cone");
  return std::sqrt(inside) - tan_psi / (2.0 * kSqrt2);
}

double factor_F(const ElementState& state) {
  const double trT = state.trace();
  if (!(trT < 0.0)) throw AdmissibilityError("factor_F requires tr(T) < 0");
  // normalized deviator has eigenvalues (s, -s/2, -s/2); compression (s >= 0)
  // sits on the F = 1 branch, extension reduces to 1 - tan(psi)/sqrt(2)
  const double s = 2.0 * (state.T1 - state.T2) / (3.0 * trT);
  return s >= 0.0 ? 1.0 : 1.0 + 1.5 * s;
}

VoidLimits void_limits(const HypoParams& params, double trT) {
  if (trT > 0.0) throw DomainError("void_limits requires tr(T) <= 0");
  const double ratio = std::exp(-std::pow(-trT / params.h_s, params.n));
  return VoidLimits{params.e_d0 * ratio, params.e_c0 * ratio, params.e_i0 * ratio};
}

double pykno_fd(double e, const VoidLimits& limits, double alpha) {
  double base = (e - limits.e_d) / (limits.e_c - limits.e_d);
  if (base < 0.0) {
    if (e < limits.e_d * (1.0 - kVoidBandTol))
      throw AdmissibilityError("void ratio below e_d");
    base = 0.0;
  }
  return std::pow(base, alpha);
}

namespace detail {

ParamConstants ParamConstants::from(const HypoParams& p) {
  ParamConstants c;
  c.a = coeff_a(p.phi_c);
  c.a_sq = c.a * c.a;
  const double r = (p.e_i0 - p.e_d0) / (p.e_c0 - p.e_d0);
  c.fs_denom = 3.0 + c.a_sq - c.a * kSqrt3 * std::pow(r, p.alpha);
  if (!(c.fs_denom > 0.0))
    throw DomainError("stiffness denominator is not positive for this parameter set");
  c.hs_over_n = p.h_s / p.n;
  return c;
}

StateFactors state_factors(const HypoParams& p, const ParamConstants& c,
                           double e, double trT) {
  StateFactors f;
  const double r = -trT / p.h_s;
  const double r_pow_n = std::pow(r, p.n);
  const double ratio = std::exp(-r_pow_n);
  f.limits = VoidLimits{p.e_d0 * ratio, p.e_c0 * ratio, p.e_i0 * ratio};
  f.f_d = pykno_fd(e, f.limits, p.alpha);
  // (-trT/h_s)^(1-n) = r / r^n; r > 0 because trT < 0 on every accepted state
  const double r_pow_1mn = r / r_pow_n;
  const double e_i = f.limits.e_i;
  f.f_s = c.hs_over_n * ((1.0 + e_i) / e_i) * std::pow(e_i / e, p.beta) *
          r_pow_1mn / c.fs_denom;
  return f;
}

}  // namespace detail

double stiffness_fs(const HypoParams& params, double e, double trT) {
  if (!(trT < 0.0)) throw DomainError("stiffness_fs requires tr(T) < 0");
  if (!(e > 0.0)) throw DomainError("stiffness_fs requires e > 0");
  const auto c = detail::ParamConstants::from(params);
  const double r = -trT / params.h_s;
  const double r_pow_n = std::pow(r, params.n);
  const double e_i = params.e_i0 * std::exp(-r_pow_n);
  return c.hs_over_n * ((1.0 + e_i) / e_i) * std::pow(e_i / e, params.beta) *
         (r / r_pow_n) / c.fs_denom;
}

GeneralRate rate_general(const Eigen::Matrix3d& T, const Eigen::Matrix3d& D,
                         double e, const HypoParams& params) {
  const double trT = T.trace();
  if (!(trT < 0.0)) throw AdmissibilityError("rate_general requires tr(T) < 0");

  const auto c = detail::ParamConstants::from(params);
  const auto f = detail::state_factors(params, c, e, trT);
  if (e > f.limits.e_i * (1.0 + kVoidBandTol))
    throw AdmissibilityError("void ratio above e_i");

  const Eigen::Matrix3d T_hat = T / trT;
  const Eigen::Matrix3d dev = T_hat - Eigen::Matrix3d::Identity() / 3.0;
  const double F = factor_F(T);
  const double tr_That2 = T_hat.squaredNorm();
  const double D_norm = D.norm();

  GeneralRate rate;
  rate.T_dot = (f.f_s / tr_That2) *
               (F * F * D + c.a_sq * (T_hat * D).trace() * T_hat +
                f.f_d * c.a * F * (T_hat + dev) * D_norm);
  rate.e_dot = (1.0 + e) * D.trace();
  return rate;
}

}  // namespace hypocal
