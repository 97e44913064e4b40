#include "bayesmv/coefficients.hpp"

#include "bayesmv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bayesmv {

namespace {

// Unchecked closed forms for quadrature integrands; callers validate.
double alpha_raw(double t, double T, double P0) {
  return -(1.0 + P0 * t) * (T - t) / (1.0 + P0 * (2.0 * T - t));
}

// (1 + P0 t)(1 + P0 (2T - t)) = (1 + P0 T)^2 - P0^2 (T - t)^2, so the three
// logarithms collapse into one log1p that vanishes exactly at t = T and keeps
// full relative precision as P0 -> 0.
double gamma_raw(double t, double T, double P0) {
  const double r = P0 * (T - t) / (1.0 + P0 * T);
  return 0.5 * std::log1p(-r * r);
}

}  // namespace

void ModelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(sigma) && finite(horizon_T) && finite(tau) && finite(target_w) &&
        finite(prior_mean_m0) && finite(prior_var_P0))) {
    throw DomainError("model parameters must be finite");
  }
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(horizon_T > 0.0)) throw DomainError("horizon T must be positive");
  if (!(tau >= 0.0)) throw DomainError("tau must be non-negative");
  if (!(prior_var_P0 >= 0.0)) throw DomainError("prior variance P0 must be non-negative");
}

double checked_time(double t, double horizon, const char* what) {
  if (!(t >= -kTimeClampSlack && t <= horizon + kTimeClampSlack)) {
    throw DomainError(std::string(what) + " = " + std::to_string(t) +
                      " lies outside [0, " + std::to_string(horizon) + "]");
  }
  return std::clamp(t, 0.0, horizon);
}

double posterior_variance(double t, double P0) {
  if (!(t >= 0.0)) throw DomainError("posterior_variance: t must be non-negative");
  if (!(P0 >= 0.0)) throw DomainError("posterior_variance: P0 must be non-negative");
  return P0 / (1.0 + P0 * t);
}

double alpha(double t, const ModelParams& params) {
  params.validate();
  const double T = params.horizon_T;
  const double P0 = params.prior_var_P0;
  t = checked_time(t, T);
  return alpha_raw(t, T, P0);
}

double gamma(double t, const ModelParams& params) {
  params.validate();
  const double T = params.horizon_T;
  const double P0 = params.prior_var_P0;
  t = checked_time(t, T);
  return gamma_raw(t, T, P0);
}

double eta(double t, const ModelParams& params, const QuadratureOptions& quad) {
  params.validate();
  t = checked_time(t, params.horizon_T);
  if (params.tau == 0.0) return 0.0;
  const double T = params.horizon_T;
  const double P0 = params.prior_var_P0;
  const double integral =
      simpson([&](double s) { return alpha_raw(s, T, P0); }, t, T, quad.intervals);
  return 0.5 * params.tau * integral;
}

double zeta(double t, const ModelParams& params, const QuadratureOptions& quad) {
  params.validate();
  t = checked_time(t, params.horizon_T);
  if (params.tau == 0.0) throw DeterministicLimitError();
  const double T = params.horizon_T;
  const double P0 = params.prior_var_P0;
  const double log_term =
      std::log(std::numbers::pi * params.tau / (params.sigma * params.sigma));
  const double p_t = posterior_variance(t, P0);
  // int_t^T P_s^2 eta(s) ds = (tau/2) int_t^T alpha(u) (P_t - P_u) du, since
  // int_t^u P_s^2 ds = P_t - P_u; one pass replaces the nested integral.
  // With P_t - P_u = P0 P_t (u - t) / (1 + P0 u) the (1 + P0 u) factor of alpha
  // cancels, leaving one division per node.
  const double c = P0 / (1.0 + P0 * T);
  const double weight = P0 * p_t;
  const double integral = simpson(
      [&](double u) {
        const double r = c * (T - u);
        return 0.5 * std::log1p(-r * r) -
               weight * (u - t) * (T - u) / (1.0 + P0 * (2.0 * T - u));
      },
      t, T, quad.intervals);
  return -0.5 * params.tau * ((T - t) * log_term - integral);
}

double curvature_A(double t, double m, const ModelParams& params) {
  return std::exp(alpha(t, params) * m * m + gamma(t, params));
}

double value(double t, double x, double m, const ModelParams& params,
             bool deterministic_limit, const QuadratureOptions& quad) {
  const double gap = x - params.target_w;
  const double wealth_part = curvature_A(t, m, params) * gap * gap;
  if (deterministic_limit) return wealth_part;
  if (params.tau == 0.0) throw DeterministicLimitError();
  return wealth_part + eta(t, params, quad) * m * m + zeta(t, params, quad);
}

GaussianPolicy optimal_policy(double t, double x, double m, const ModelParams& params) {
  params.validate();
  t = checked_time(t, params.horizon_T);
  return policy_from_coefficients(posterior_variance(t, params.prior_var_P0),
                                  alpha(t, params), gamma(t, params), x, m, params);
}

BeliefState BeliefState::on_characteristic(double t, double m, const ModelParams& params) {
  params.validate();
  t = checked_time(t, params.horizon_T);
  return {t, m, posterior_variance(t, params.prior_var_P0)};
}

CoefficientSet CoefficientSet::at(double t, const ModelParams& params,
                                  const QuadratureOptions& quad) {
  params.validate();
  CoefficientSet set;
  set.t = checked_time(t, params.horizon_T);
  set.posterior_var = posterior_variance(set.t, params.prior_var_P0);
  set.alpha = bayesmv::alpha(set.t, params);
  set.gamma = bayesmv::gamma(set.t, params);
  if (params.tau > 0.0) {
    set.eta = bayesmv::eta(set.t, params, quad);
    set.zeta = bayesmv::zeta(set.t, params, quad);
    set.has_premium = true;
  }
  return set;
}

double CoefficientSet::curvature(double m) const { return std::exp(alpha * m * m + gamma); }

double CoefficientSet::premium(double m) const { return eta * m * m + zeta; }

double CoefficientSet::linear(double m, double target_w) const {
  return -2.0 * target_w * curvature(m);
}

double CoefficientSet::constant(double m, double target_w) const {
  return target_w * target_w * curvature(m) + premium(m);
}

double CoefficientSet::value(double x, double m, double target_w) const {
  const double gap = x - target_w;
  return curvature(m) * gap * gap + premium(m);
}

}  // namespace bayesmv
