#pragma once

#include <stdexcept>
#include <string>

namespace bayesmv {

/// Raised when an argument falls outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the entropy premium is requested with tau == 0.
class DeterministicLimitError : public DomainError {
 public:
  DeterministicLimitError()
      : DomainError("deterministic limit has no entropy premium (tau == 0)") {}
};

/// Market, prior and objective constants of the single-asset model.
///
/// Wealth is discounted, so the risk-free rate never appears. The unknown
/// parameter is the Sharpe ratio rho with Gaussian prior N(prior_mean_m0,
/// prior_var_P0).
struct ModelParams {
  double sigma = 0.2;         ///< asset volatility
  double horizon_T = 1.0;     ///< investment horizon
  double tau = 1.0;           ///< entropy weight
  double target_w = 1.0;      ///< target wealth
  double prior_mean_m0 = 0.0; ///< prior mean of rho
  double prior_var_P0 = 1.0;  ///< prior variance of rho

  /// Throws DomainError unless sigma > 0, T > 0, tau >= 0, P0 >= 0 and all
  /// fields are finite.
  void validate() const;

  ModelParams with_tau(double value) const {
    ModelParams copy = *this;
    copy.tau = value;
    return copy;
  }
  ModelParams with_target(double value) const {
    ModelParams copy = *this;
    copy.target_w = value;
    return copy;
  }
  ModelParams with_prior(double m0, double p0) const {
    ModelParams copy = *this;
    copy.prior_mean_m0 = m0;
    copy.prior_var_P0 = p0;
    return copy;
  }
};

/// Times within this distance outside [0, T] are clamped onto the boundary.
inline constexpr double kTimeClampSlack = 1e-12;

/// Returns t clamped into [0, T], or throws if it lies beyond the slack.
double checked_time(double t, double horizon, const char* what = "t");

}  // namespace bayesmv
