#include "bayesmv/montecarlo.hpp"

#include "bayesmv/filter.hpp"
#include "bayesmv/parallel.hpp"
#include "bayesmv/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bayesmv {

namespace {

struct StepCoefficients {
  double t;
  double posterior_var;
  double alpha;
  double gamma;
};

// Welford running moments; keeps the mean exact when all samples coincide.
struct RunningMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }
  double sample_variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
};

std::vector<std::size_t> checkpoint_steps(std::span<const double> checkpoints, double horizon,
                                          std::size_t n_steps) {
  std::vector<std::size_t> steps;
  steps.reserve(checkpoints.size());
  const double dt = horizon / static_cast<double>(n_steps);
  for (double t : checkpoints) {
    const double clamped = checked_time(t, horizon, "checkpoint");
    const double k = std::round(clamped / dt);
    if (std::abs(k * dt - clamped) > 1e-9 * horizon) {
      throw DomainError("checkpoint t = " + std::to_string(t) +
                        " is not on the simulation grid (choose n_steps so that it is)");
    }
    steps.push_back(static_cast<std::size_t>(k));
  }
  return steps;
}

}  // namespace

std::string_view to_string(DrivingMode mode) {
  return mode == DrivingMode::innovation ? "innovation" : "physical";
}

DrivingMode parse_driving_mode(std::string_view text) {
  if (text == "innovation") return DrivingMode::innovation;
  if (text == "physical") return DrivingMode::physical;
  throw DomainError("unknown driving mode '" + std::string(text) +
                    "' (expected innovation or physical)");
}

StateIncrement controlled_increment(const GaussianPolicy& policy, double m,
                                    double posterior_var, double sigma, double dt,
                                    double dW_hat, double dB) {
  const double u = policy.mean_position;
  StateIncrement inc;
  inc.dx = sigma * u * m * dt + sigma * u * dW_hat + sigma * std::sqrt(policy.variance) * dB;
  inc.dm = posterior_var * dW_hat;
  return inc;
}

PathEnsemble simulate_controlled(const ModelParams& params, const SimulationSettings& settings) {
  params.validate();
  if (settings.n_paths == 0) throw DomainError("n_paths must be at least 1");
  if (settings.n_steps < kMinControlledSteps) {
    throw DomainError("n_steps = " + std::to_string(settings.n_steps) +
                      " is too coarse for the controlled simulation; use at least " +
                      std::to_string(kMinControlledSteps) + " (200 is the usual choice)");
  }
  if (!std::isfinite(settings.x0)) throw DomainError("x0 must be finite");

  const std::size_t n_paths = settings.n_paths;
  const std::size_t n_steps = settings.n_steps;
  const double T = params.horizon_T;
  const double dt = T / static_cast<double>(n_steps);
  const double sqrt_dt = std::sqrt(dt);
  const auto times = uniform_time_grid(T, n_steps);
  const auto cp_steps = checkpoint_steps(settings.checkpoints, T, n_steps);

  std::vector<StepCoefficients> table(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = times[k];
    table[k] = {t, posterior_variance(t, params.prior_var_P0), alpha(t, params),
                gamma(t, params)};
  }

  const bool entropic = params.tau > 0.0;
  // H(pi) = -1/2 log(2 pi e var) with log var = log(tau/(2 sigma^2)) - alpha m^2 - gamma
  const double log_base_variance =
      entropic ? std::log(params.tau / (2.0 * params.sigma * params.sigma)) : 0.0;
  const double log_two_pi_e = std::log(2.0 * std::numbers::pi) + 1.0;
  const bool physical = settings.mode == DrivingMode::physical;
  const double prior_sd = std::sqrt(params.prior_var_P0);

  std::vector<double> wealth(n_paths), belief(n_paths), entropy(n_paths);
  std::vector<std::vector<double>> cp_wealth(cp_steps.size(), std::vector<double>(n_paths));
  auto cp_belief = cp_wealth;
  auto cp_entropy = cp_wealth;

  parallel_for(n_paths, [&](std::size_t p) {
    PathStream stream(settings.seed, p);
    const double rho = physical ? stream.normal(params.prior_mean_m0, prior_sd) : 0.0;
    double x = settings.x0;
    double m = params.prior_mean_m0;
    double cost = 0.0;
    auto record = [&](std::size_t k) {
      for (std::size_t c = 0; c < cp_steps.size(); ++c) {
        if (cp_steps[c] == k) {
          cp_wealth[c][p] = x;
          cp_belief[c][p] = m;
          cp_entropy[c][p] = cost;
        }
      }
    };
    record(0);
    for (std::size_t k = 0; k < n_steps; ++k) {
      const StepCoefficients& c = table[k];
      GaussianPolicy policy =
          policy_from_coefficients(c.posterior_var, c.alpha, c.gamma, x, m, params);
      policy.mean_position *= settings.mean_scale;
      if (entropic) {
        const double log_var = log_base_variance - c.alpha * m * m - c.gamma;
        cost += params.tau * (-0.5 * (log_two_pi_e + log_var)) * dt;
      }
      const double dW = sqrt_dt * stream.normal();
      const double dB = sqrt_dt * stream.normal();
      const double dW_hat = physical ? (rho - m) * dt + dW : dW;
      const StateIncrement inc =
          controlled_increment(policy, m, c.posterior_var, params.sigma, dt, dW_hat, dB);
      x += inc.dx;
      m += inc.dm;
      record(k + 1);
    }
    wealth[p] = x;
    belief[p] = m;
    entropy[p] = cost;
  });

  PathEnsemble ensemble;
  ensemble.mode = settings.mode;
  ensemble.checkpoints.resize(cp_steps.size());
  for (std::size_t c = 0; c < cp_steps.size(); ++c) {
    ensemble.checkpoints[c].step = cp_steps[c];
    ensemble.checkpoints[c].t = times[cp_steps[c]];
  }
  for (std::size_t p = 0; p < n_paths; ++p) {
    bool finite = std::isfinite(wealth[p]) && std::isfinite(belief[p]) &&
                  std::isfinite(entropy[p]);
    for (std::size_t c = 0; c < cp_steps.size() && finite; ++c) {
      finite = std::isfinite(cp_wealth[c][p]) && std::isfinite(cp_entropy[c][p]);
    }
    if (!finite) {
      ++ensemble.quarantined;
      continue;
    }
    const double gap = wealth[p] - params.target_w;
    ensemble.terminal_wealth.push_back(wealth[p]);
    ensemble.terminal_belief.push_back(belief[p]);
    ensemble.terminal_cost.push_back(gap * gap);
    ensemble.entropy_cost.push_back(entropy[p]);
    for (std::size_t c = 0; c < cp_steps.size(); ++c) {
      ensemble.checkpoints[c].wealth.push_back(cp_wealth[c][p]);
      ensemble.checkpoints[c].belief.push_back(cp_belief[c][p]);
      ensemble.checkpoints[c].entropy_cost.push_back(cp_entropy[c][p]);
    }
  }
  return ensemble;
}

Estimate sample_estimate(std::span<const double> values) {
  if (values.empty()) throw DomainError("cannot estimate from an empty sample");
  RunningMoments moments;
  for (double v : values) moments.add(v);
  return {moments.mean,
          std::sqrt(moments.sample_variance() / static_cast<double>(moments.count))};
}

Estimate estimate_objective(const PathEnsemble& ensemble) {
  if (ensemble.size() == 0) throw DomainError("cannot estimate from an empty ensemble");
  std::vector<double> total(ensemble.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    total[i] = ensemble.terminal_cost[i] + ensemble.entropy_cost[i];
  }
  return sample_estimate(total);
}

std::vector<MartingalePoint> martingale_diagnostic(const ModelParams& params,
                                                   const SimulationSettings& settings,
                                                   const QuadratureOptions& quad) {
  return martingale_from_ensemble(params, simulate_controlled(params, settings), quad);
}

std::vector<MartingalePoint> martingale_from_ensemble(const ModelParams& params,
                                                      const PathEnsemble& ensemble,
                                                      const QuadratureOptions& quad) {
  if (ensemble.size() == 0) throw DomainError("every path was quarantined");
  std::vector<MartingalePoint> points;
  points.reserve(ensemble.checkpoints.size());
  for (const CheckpointSamples& cp : ensemble.checkpoints) {
    const CoefficientSet coeffs = CoefficientSet::at(cp.t, params, quad);
    std::vector<double> samples(cp.wealth.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      // With tau == 0 the premium is zero, leaving the deterministic-limit value.
      samples[i] = coeffs.value(cp.wealth[i], cp.belief[i], params.target_w) +
                   cp.entropy_cost[i];
    }
    const Estimate est = sample_estimate(samples);
    points.push_back({cp.t, est.estimate, est.std_error});
  }
  return points;
}

std::vector<FrontierRow> frontier_sweep(const ModelParams& params,
                                        const SimulationSettings& settings,
                                        std::span<const double> w_grid) {
  if (w_grid.empty()) throw DomainError("frontier_sweep: w_grid is empty");
  std::vector<FrontierRow> rows;
  rows.reserve(w_grid.size());
  SimulationSettings run = settings;
  run.checkpoints.clear();
  for (double w : w_grid) {
    const PathEnsemble ensemble = simulate_controlled(params.with_target(w), run);
    if (ensemble.size() == 0) throw DomainError("every path was quarantined");
    RunningMoments moments;
    for (double x : ensemble.terminal_wealth) moments.add(x);
    const double sd = std::sqrt(moments.sample_variance());
    rows.push_back({w, moments.mean, sd, sd / std::sqrt(static_cast<double>(moments.count))});
  }
  return rows;
}

}  // namespace bayesmv
