#include "hypocal/element_sim.hpp"

#include <cmath>

namespace hypocal {

namespace {

// L and N from the algebraic expansion of the axisymmetric rate equations.
void assemble_LN(const ElementState& s, double a, double a_sq,
                 Eigen::Matrix2d& L, Eigen::Vector2d& N) {
  const double T1 = s.T1;
  const double T2 = s.T2;
  const double trT = T1 + 2.0 * T2;
  const double trT2 = T1 * T1 + 2.0 * T2 * T2;  // tr(T^2)
  L(0, 0) = (trT * trT + a_sq * T1 * T1) / trT2;
  L(0, 1) = 2.0 * a_sq * T1 * T2 / trT2;
  L(1, 0) = a_sq * T1 * T2 / trT2;
  L(1, 1) = (trT * trT + 2.0 * a_sq * T2 * T2) / trT2;
  N[0] = a * (5.0 * T1 - 2.0 * T2) * trT / (3.0 * trT2);
  N[1] = a * (4.0 * T2 - T1) * trT / (3.0 * trT2);
}

// Admissibility check with clamping of e onto [e_d, e_i] inside the tolerance
// band; fills the state factors on success.
RejectReason evaluate_state(const HypoParams& p, const detail::ParamConstants& c,
                            ElementState& s, detail::StateFactors& out) {
  const double trT = s.trace();
  if (!(trT < 0.0)) return RejectReason::PositiveTrace;

  const double r = -trT / p.h_s;
  const double r_pow_n = std::pow(r, p.n);
  const double ratio = std::exp(-r_pow_n);
  const VoidLimits lim{p.e_d0 * ratio, p.e_c0 * ratio, p.e_i0 * ratio};

  if (s.e < lim.e_d) {
    if (s.e < lim.e_d * (1.0 - kVoidBandTol)) return RejectReason::VoidRatioBelowMin;
    s.e = lim.e_d;
  } else if (s.e > lim.e_i) {
    if (s.e > lim.e_i * (1.0 + kVoidBandTol)) return RejectReason::VoidRatioAboveMax;
    s.e = lim.e_i;
  }

  out.limits = lim;
  out.f_d = std::pow((s.e - lim.e_d) / (lim.e_c - lim.e_d), p.alpha);
  out.f_s = c.hs_over_n * ((1.0 + lim.e_i) / lim.e_i) *
            std::pow(lim.e_i / s.e, p.beta) * (r / r_pow_n) / c.fs_denom;
  if (!std::isfinite(out.f_s) || !std::isfinite(out.f_d))
    return RejectReason::NonFinite;
  return RejectReason::None;
}

// Unique positive root of the constraint quadratic in x = |D|, assembled from
// the second-row coefficients. C < 0 always, so A > 0 guarantees exactly one
// positive root; A <= 0 can give zero or two and both cases are rejected.
RejectReason solve_triaxial(const Eigen::Matrix2d& L, const Eigen::Vector2d& N,
                            double f_d, double& x_out, double& D2_out) {
  constexpr double D1 = kReferenceD1;
  const double L21 = L(1, 0);
  const double L22 = L(1, 1);
  const double N2 = N[1];

  const double A = L22 * L22 - 2.0 * f_d * f_d * N2 * N2;
  const double B = -4.0 * f_d * N2 * L21 * D1;
  const double C = -(2.0 * L21 * L21 + L22 * L22) * (D1 * D1);

  double cand[2];
  int n_cand = 0;
  if (A == 0.0) {
    if (B == 0.0) return RejectReason::NoPositiveRoot;
    cand[n_cand++] = -C / B;
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return RejectReason::NoPositiveRoot;
    const double qq = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    if (qq == 0.0) {
      cand[0] = 0.0;
      cand[1] = 0.0;
    } else {
      cand[0] = qq / A;
      cand[1] = C / qq;
    }
    n_cand = 2;
  }

  const double pos_tol = 1e-12 * std::abs(D1);
  int n_pos = 0;
  double x = 0.0;
  for (int i = 0; i < n_cand; ++i) {
    if (cand[i] > pos_tol) {
      ++n_pos;
      x = cand[i];
    }
  }
  if (n_pos == 0) return RejectReason::NoPositiveRoot;
  if (n_pos > 1) return RejectReason::MultiplePositiveRoots;

  const double D2 = -(f_d * N2 * x + L21 * D1) / L22;
  if (!std::isfinite(D2)) return RejectReason::NonFinite;
  // both identities hold algebraically for a true root; enforce numerically
  if (std::abs(x - std::sqrt(D1 * D1 + 2.0 * D2 * D2)) > 1e-10)
    return RejectReason::NonFinite;
  if (std::abs(L21 * D1 + L22 * D2 + f_d * N2 * x) > 1e-9)
    return RejectReason::NonFinite;

  x_out = x;
  D2_out = D2;
  return RejectReason::None;
}

[[noreturn]] void throw_admissibility(RejectReason r) {
  throw AdmissibilityError(to_string(r));
}

}  // namespace

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::None: return "none";
    case RejectReason::PositiveTrace: return "stress trace not compressive";
    case RejectReason::VoidRatioBelowMin: return "void ratio below e_d";
    case RejectReason::VoidRatioAboveMax: return "void ratio above e_i";
    case RejectReason::NoPositiveRoot: return "no positive root of the triaxial constraint";
    case RejectReason::MultiplePositiveRoots: return "multiple positive roots of the triaxial constraint";
    case RejectReason::NonFinite: return "non-finite value";
  }
  return "unknown";
}

void validate(const TestSpec& spec) {
  if (spec.n_step < 1) throw DomainError("n_step must be >= 1");
  if (!(spec.initial.e > 0.0)) throw DomainError("initial void ratio must be positive");
  if (spec.kind == TestKind::Oedometer) {
    if (spec.e_fin > spec.initial.e)
      throw DomainError("oedometer termination unreachable: e_fin > initial e");
    if (!(spec.e_fin > -1.0)) throw DomainError("e_fin must exceed -1");
  } else {
    if (spec.eps_fin < 0.0)
      throw DomainError("triaxial termination unreachable: eps_fin < 0");
  }
}

AxisymRates axisym_rates(const ElementState& state, const HypoParams& params) {
  validate(params);
  const auto c = detail::ParamConstants::from(params);
  ElementState s = state;
  detail::StateFactors f;
  if (auto r = evaluate_state(params, c, s, f); r != RejectReason::None)
    throw_admissibility(r);
  AxisymRates out;
  assemble_LN(s, c.a, c.a_sq, out.L, out.N);
  out.f_s = f.f_s;
  out.f_d = f.f_d;
  return out;
}

OedometerRate oedometer_rate(const ElementState& state, const HypoParams& params) {
  const AxisymRates r = axisym_rates(state, params);
  constexpr double D1 = kReferenceD1;
  OedometerRate out;
  out.T1_dot = r.f_s * (r.L(0, 0) * D1 + r.f_d * r.N[0]);  // x = |D1| = 1
  out.T2_dot = r.f_s * (r.L(1, 0) * D1 + r.f_d * r.N[1]);
  out.e_dot = (1.0 + state.e) * D1;
  return out;
}

TriaxialRate triaxial_rate(const ElementState& state, const HypoParams& params) {
  const AxisymRates r = axisym_rates(state, params);
  constexpr double D1 = kReferenceD1;
  TriaxialRate out;
  const RejectReason rr = solve_triaxial(r.L, r.N, r.f_d, out.x, out.D2);
  if (rr == RejectReason::NoPositiveRoot || rr == RejectReason::MultiplePositiveRoots)
    throw NonUniqueRootError(to_string(rr));
  if (rr != RejectReason::None) throw AdmissibilityError(to_string(rr));
  out.T1_dot = r.f_s * (r.L(0, 0) * D1 + r.L(0, 1) * out.D2 + r.f_d * r.N[0] * out.x);
  out.e_dot = (1.0 + state.e) * (D1 + 2.0 * out.D2);
  out.residual = r.L(1, 0) * D1 + r.L(1, 1) * out.D2 + r.f_d * r.N[1] * out.x;
  return out;
}

double integration_time(const TestSpec& spec) {
  validate(spec);
  if (spec.kind == TestKind::Oedometer) {
    const double e0 = spec.initial.e;
    return -std::log(1.0 - (e0 - spec.e_fin) / (e0 + 1.0));
  }
  return spec.eps_fin;
}

std::optional<Trajectory> try_simulate(const TestSpec& spec, const HypoParams& params,
                                       StepFailure* failure) {
  const double t_f = integration_time(spec);

  detail::ParamConstants c;
  try {
    c = detail::ParamConstants::from(params);
  } catch (const DomainError&) {
    if (failure) *failure = StepFailure{0, RejectReason::NonFinite};
    return std::nullopt;
  }

  const int n = spec.n_step;
  const double dt = t_f / n;
  constexpr double D1 = kReferenceD1;
  const bool oedometric = spec.kind == TestKind::Oedometer;

  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(n) + 1);
  ElementState st = spec.initial;

  const auto fail = [&](int step, RejectReason r) -> std::optional<Trajectory> {
    if (failure) *failure = StepFailure{step, r};
    return std::nullopt;
  };

  Eigen::Matrix2d L;
  Eigen::Vector2d N;
  detail::StateFactors f;

  const int n_updates = t_f > 0.0 ? n : 0;
  for (int k = 0; k < n_updates; ++k) {
    if (auto r = evaluate_state(params, c, st, f); r != RejectReason::None)
      return fail(k, r);
    assemble_LN(st, c.a, c.a_sq, L, N);

    double T1_dot, T2_dot, e_dot;
    if (oedometric) {
      T1_dot = f.f_s * (L(0, 0) * D1 + f.f_d * N[0]);
      T2_dot = f.f_s * (L(1, 0) * D1 + f.f_d * N[1]);
      e_dot = (1.0 + st.e) * D1;
    } else {
      double x, D2;
      if (auto r = solve_triaxial(L, N, f.f_d, x, D2); r != RejectReason::None)
        return fail(k, r);
      T1_dot = f.f_s * (L(0, 0) * D1 + L(0, 1) * D2 + f.f_d * N[0] * x);
      T2_dot = f.f_s * (L(1, 0) * D1 + L(1, 1) * D2 + f.f_d * N[1] * x);
      e_dot = (1.0 + st.e) * (D1 + 2.0 * D2);
    }

    traj.samples.push_back({k * dt, st.T1, st.T2, st.e});
    st.T1 += dt * T1_dot;
    st.T2 += dt * T2_dot;
    st.e += dt * e_dot;
    if (!std::isfinite(st.T1) || !std::isfinite(st.T2) || !std::isfinite(st.e))
      return fail(k + 1, RejectReason::NonFinite);
  }

  if (auto r = evaluate_state(params, c, st, f); r != RejectReason::None)
    return fail(n_updates, r);
  traj.samples.push_back({t_f, st.T1, st.T2, st.e});
  return traj;
}

Trajectory simulate(const TestSpec& spec, const HypoParams& params) {
  StepFailure failure;
  if (auto traj = try_simulate(spec, params, &failure)) return std::move(*traj);
  throw SimulationRejected(failure.step, failure.reason);
}

}  // namespace hypocal
