#pragma once

#include "bayesmv/params.hpp"

#include <cmath>
#include <cstddef>

namespace bayesmv {

/// Composite Simpson resolution used for the entropy-premium integrals.
struct QuadratureOptions {
  std::size_t intervals = 1024;  ///< rounded up to an even count
};

/// Kalman-Bucy posterior variance P0 / (1 + P0 t).
double posterior_variance(double t, double P0);

double alpha(double t, const ModelParams& params);
double gamma(double t, const ModelParams& params);

/// (tau/2) * integral_t^T alpha(s) ds.
double eta(double t, const ModelParams& params, const QuadratureOptions& quad = {});

/// Constant entropy-premium coefficient. Throws DeterministicLimitError when
/// tau == 0.
double zeta(double t, const ModelParams& params, const QuadratureOptions& quad = {});

/// Value-function curvature exp(alpha m^2 + gamma); coefficient of (x-w)^2.
double curvature_A(double t, double m, const ModelParams& params);

/// Closed-form value A (x-w)^2 + eta m^2 + zeta.
///
/// With `deterministic_limit` the entropy premium is dropped and the
/// deterministic Bayesian Markowitz value A (x-w)^2 is returned. Without it,
/// tau == 0 throws DeterministicLimitError.
double value(double t, double x, double m, const ModelParams& params,
             bool deterministic_limit = false, const QuadratureOptions& quad = {});

/// Optimal Gaussian relaxed control at a state.
struct GaussianPolicy {
  double mean_position = 0.0;  ///< discounted dollar position
  double variance = 0.0;       ///< position variance, zero iff tau == 0
};

GaussianPolicy optimal_policy(double t, double x, double m, const ModelParams& params);

/// Shared policy formula given the time-dependent coefficients. `posterior_var`
/// is P_t on the model characteristic.
inline GaussianPolicy policy_from_coefficients(double posterior_var, double alpha_t,
                                               double gamma_t, double x, double m,
                                               const ModelParams& params);

/// Posterior state (t, m, P).
struct BeliefState {
  double t = 0.0;
  double m = 0.0;
  double P = 0.0;

  /// State on the model characteristic: P is slaved to t.
  static BeliefState on_characteristic(double t, double m, const ModelParams& params);
};

/// alpha, gamma, eta, zeta at one time, with the derived value-function pieces.
///
/// eta and zeta are only defined for tau > 0; for tau == 0 both are stored as
/// zero and `has_premium` is false.
struct CoefficientSet {
  double t = 0.0;
  double posterior_var = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  bool has_premium = false;

  static CoefficientSet at(double t, const ModelParams& params,
                           const QuadratureOptions& quad = {});

  double curvature(double m) const;                          // A
  double premium(double m) const;                            // D
  double linear(double m, double target_w) const;           // B = -2 w A
  double constant(double m, double target_w) const;         // C = w^2 A + D
  double value(double x, double m, double target_w) const;  // A (x-w)^2 + D
};

// ---------------------------------------------------------------------------

inline GaussianPolicy policy_from_coefficients(double posterior_var, double alpha_t,
                                               double gamma_t, double x, double m,
                                               const ModelParams& params) {
  GaussianPolicy policy;
  const double gain = m * (1.0 + 2.0 * posterior_var * alpha_t) / params.sigma;
  policy.mean_position = -gain * (x - params.target_w);
  // tau / (2 sigma^2 A), written with exp(-R) so that A(T) = 1 gives tau/(2 sigma^2)
  policy.variance = params.tau / (2.0 * params.sigma * params.sigma) *
                    std::exp(-alpha_t * m * m - gamma_t);
  return policy;
}

}  // namespace bayesmv
