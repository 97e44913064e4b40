#pragma once

#include "bayesmv/params.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace bayesmv {

/// One Euler-Maruyama update of the posterior mean, m + P_t (dY - m dt), using
/// the exact posterior variance at the left endpoint t.
double filter_step(double m, double t, double dY, double dt, double P0);

/// Every path observes the same true Sharpe ratio.
struct FixedRho {
  double rho = 1.0;
};

/// Each path draws its true Sharpe ratio once from the prior N(m0, P0).
struct PriorSampled {};

using FilterMode = std::variant<FixedRho, PriorSampled>;

struct FilterPath {
  std::vector<double> m_values;  ///< posterior mean at each grid time
  double rho_true = 0.0;         ///< Sharpe ratio that generated the observations
};

/// Paths on a shared uniform grid. P at each grid time is the closed-form
/// posterior variance and is not stored.
struct FilterEnsemble {
  std::vector<double> times;  ///< n_steps + 1 points from 0 to T
  std::vector<FilterPath> paths;
};

/// Simulates dY = rho dt + dW and filters it. Paths are deterministic given
/// (seed, path index) and never see a control input.
FilterEnsemble simulate_filter_paths(const ModelParams& params, const FilterMode& mode,
                                     std::size_t n_paths, std::size_t n_steps,
                                     std::uint64_t seed);

/// Same paths as simulate_filter_paths but only the terminal posterior mean.
std::vector<double> simulate_filter_terminal(const ModelParams& params,
                                             const FilterMode& mode, std::size_t n_paths,
                                             std::size_t n_steps, std::uint64_t seed);

/// Uniform grid t_k = k T / n_steps with t_n == T exactly.
std::vector<double> uniform_time_grid(double horizon, std::size_t n_steps);

}  // namespace bayesmv
