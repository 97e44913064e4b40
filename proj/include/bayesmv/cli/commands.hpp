#pragma once

#include "bayesmv/cli/config.hpp"
#include "bayesmv/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace bayesmv::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitIoOrConfig = 2;

/// Per-command defaults for unset n_paths / n_steps.
inline constexpr std::size_t kPathsDefaultPaths = 5;
inline constexpr std::size_t kSimulateDefaultPaths = 100000;
inline constexpr std::size_t kFrontierDefaultPaths = 10000;
inline constexpr std::size_t kDefaultSteps = 200;

/// paths.csv: path_id,t,m,policy_variance
int cmd_paths(const RunConfig& config, std::ostream& log);
/// heatmap.csv: t,m,policy_variance
int cmd_heatmap(const RunConfig& config, std::ostream& log);
/// objective.csv, martingale.csv and, for both modes, mode_agreement.csv.
/// Exit 1 when any |z| > 3 or a path was quarantined.
int cmd_simulate(const RunConfig& config, std::ostream& log);
/// frontier.csv: w,mean_terminal,std_terminal,stderr_mean
int cmd_frontier(const RunConfig& config, std::ostream& log);
/// verify.csv: name,grid_size,max_abs_residual,tolerance,passed. Exit 0 iff all pass.
int cmd_verify(const RunConfig& config, std::ostream& log);

/// Dispatches a subcommand, mapping ConfigError / IoError / DomainError to
/// exit code 2 and VerificationError to exit code 1.
int run_command(std::string_view name, const RunConfig& config, std::ostream& log,
                std::ostream& err);

/// Every verify check at default grids for one parameter set.
std::vector<ResidualReport> verification_suite(const ModelParams& params,
                                               const RunConfig& config);

/// Parameter draws with sigma in [0.05, 0.5], T in [0.25, 4], tau in [0.1, 4],
/// P0 in [0, 4], m0 in [-2, 2]; other fields copied from `base`.
std::vector<ModelParams> random_parameter_draws(const ModelParams& base, std::size_t count,
                                                std::uint64_t seed);

/// (estimate - reference) / stderr, with 0/0 taken as 0.
double z_score(double difference, double std_error);

}  // namespace bayesmv::cli
