#pragma once

#include "bayesmv/montecarlo.hpp"
#include "bayesmv/params.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace bayesmv::cli {

/// Bad configuration file or option value (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "BAYESMV_OUT_DIR";

enum class ModeSelection { innovation, physical, both };

/// Every knob of a CLI run. Defaults reproduce the figure parameters:
/// P0 = 1, T = 1, tau = 1, sigma = 0.2, true rho = 1, prior mean 0, w = 1.
/// Unset n_paths / n_steps fall back to per-command defaults.
struct RunConfig {
  ModelParams params{};
  double x0 = 0.0;
  double rho = 1.0;            ///< true Sharpe ratio for `paths`
  bool prior_sampled = false;  ///< `paths`: draw rho from the prior instead
  std::optional<std::size_t> n_paths;
  std::optional<std::size_t> n_steps;
  std::uint64_t seed = 20240531;
  std::filesystem::path out_dir = ".";
  std::size_t quadrature_n = 1024;
  ModeSelection mode = ModeSelection::innovation;

  std::size_t heatmap_t_points = 101;
  std::size_t heatmap_m_points = 121;
  double m_max = 2.0;

  std::size_t frontier_points = 21;
  double frontier_span = 2.0;

  double hjb_step = 1e-3;
  std::size_t foc_states = 20;
  double alpha_fault = 0.0;  ///< verify test hook
  bool randomized_sweep = false;
  std::size_t sweep_draws = 10;

  std::size_t paths_or(std::size_t fallback) const { return n_paths.value_or(fallback); }
  std::size_t steps_or(std::size_t fallback) const { return n_steps.value_or(fallback); }
};

ModeSelection parse_mode_selection(const std::string& text);

/// Applies the keys of a flat JSON object onto `config`. Keys use the long
/// flag names (sigma, T, tau, w, m0, P0, x0, rho, n-paths, ...); an unknown
/// key or a wrongly typed value throws ConfigError.
void apply_config_text(const std::string& json_text, RunConfig& config);
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

/// Defaults plus the output-directory environment variable, if set.
RunConfig default_config();

}  // namespace bayesmv::cli
