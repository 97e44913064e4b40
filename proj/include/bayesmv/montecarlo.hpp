#pragma once

#include "bayesmv/coefficients.hpp"
#include "bayesmv/params.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace bayesmv {

/// Which Brownian representation drives the simulation.
///
/// `innovation` samples the observation-filtration Brownian motion directly;
/// `physical` draws a true rho per path and builds the innovation from it.
enum class DrivingMode { innovation, physical };

std::string_view to_string(DrivingMode mode);
DrivingMode parse_driving_mode(std::string_view text);

inline constexpr std::size_t kMinControlledSteps = 10;

struct SimulationSettings {
  double x0 = 0.0;
  DrivingMode mode = DrivingMode::innovation;
  std::size_t n_paths = 100000;
  std::size_t n_steps = 200;
  std::uint64_t seed = 0;
  /// Multiplies the optimal policy mean; 1 is the optimal policy.
  double mean_scale = 1.0;
  /// Grid times at which (X, m, accrued entropy cost) are recorded.
  std::vector<double> checkpoints;
};

/// Per-path state recorded at one checkpoint time.
struct CheckpointSamples {
  double t = 0.0;
  std::size_t step = 0;
  std::vector<double> wealth;
  std::vector<double> belief;
  std::vector<double> entropy_cost;
};

/// Result of a controlled simulation. Paths whose wealth or cost became
/// non-finite are dropped and counted in `quarantined`; every array holds the
/// remaining paths in path-index order.
struct PathEnsemble {
  std::vector<double> terminal_wealth;
  std::vector<double> terminal_belief;
  std::vector<double> terminal_cost;  ///< (X_T - w)^2
  std::vector<double> entropy_cost;   ///< tau * sum H(pi) dt, H = -1/2 log(2 pi e var)
  DrivingMode mode = DrivingMode::innovation;
  std::size_t quarantined = 0;
  std::vector<CheckpointSamples> checkpoints;

  std::size_t size() const { return terminal_wealth.size(); }
};

/// Increment of (X, m) over one step for given driver increments.
///
///   dX = sigma u m dt + sigma u dW_hat + sigma s dB,   dm = P dW_hat
///
/// with (u, s^2) the policy mean and variance and dB independent of dW_hat.
struct StateIncrement {
  double dx = 0.0;
  double dm = 0.0;
};

StateIncrement controlled_increment(const GaussianPolicy& policy, double m,
                                    double posterior_var, double sigma, double dt,
                                    double dW_hat, double dB);

/// Simulates (m, X) under the optimal Gaussian policy (optionally with its
/// mean scaled). tau == 0 gives deterministic feedback and zero entropy cost.
/// Throws DomainError for n_steps < kMinControlledSteps or bad checkpoints.
PathEnsemble simulate_controlled(const ModelParams& params, const SimulationSettings& settings);

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error (sample sd / sqrt(n), 0 for one sample).
Estimate sample_estimate(std::span<const double> values);

/// Mean of terminal_cost + entropy_cost with its standard error.
Estimate estimate_objective(const PathEnsemble& ensemble);

struct MartingalePoint {
  double t = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// MC mean of M_t = V(t, X_t, m_t) + accrued entropy cost at each checkpoint in
/// `settings.checkpoints`. Under the optimal policy every mean should equal
/// value(0, x0, m0). tau == 0 uses the deterministic-limit value.
/// Martingale means computed from the checkpoints of an existing ensemble.
std::vector<MartingalePoint> martingale_from_ensemble(const ModelParams& params,
                                                      const PathEnsemble& ensemble,
                                                      const QuadratureOptions& quad = {});

std::vector<MartingalePoint> martingale_diagnostic(const ModelParams& params,
                                                   const SimulationSettings& settings,
                                                   const QuadratureOptions& quad = {});

struct FrontierRow {
  double w = 0.0;
  double mean_terminal = 0.0;
  double std_terminal = 0.0;
  double stderr_mean = 0.0;
};

/// Terminal-wealth mean and spread for each target in `w_grid`. The target in
/// `params` is ignored; every row reuses the same seed.
std::vector<FrontierRow> frontier_sweep(const ModelParams& params,
                                        const SimulationSettings& settings,
                                        std::span<const double> w_grid);

}  // namespace bayesmv
