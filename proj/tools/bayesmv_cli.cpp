// Command-line front end: paths, heatmap, simulate, frontier, verify.

#include "bayesmv/cli/commands.hpp"
#include "bayesmv/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using bayesmv::cli::RunConfig;

// Flag values are captured separately and applied after the config file, so
// explicit flags always win.
struct FlagValues {
  std::optional<std::string> config_path;
  std::optional<double> sigma, horizon, tau, target, m0, p0, x0, rho, m_max, w_span, hjb_step,
      alpha_fault;
  std::optional<std::size_t> n_paths, n_steps, quadrature_n, t_points, m_points, w_points,
      foc_states, sweep_draws;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, mode;
  bool prior_sampled = false;
  bool randomized_sweep = false;
};

void add_options(CLI::App& cmd, FlagValues& f) {
  cmd.add_option("--config", f.config_path, "Flat JSON file of option values");
  cmd.add_option("--seed", f.seed, "Base seed for all random streams");
  cmd.add_option("--out", f.out, "Output directory (default: $BAYESMV_OUT_DIR or .)");
  cmd.add_option("--n-paths", f.n_paths, "Number of simulated paths");
  cmd.add_option("--n-steps", f.n_steps, "Time steps per path");
  cmd.add_option("--sigma", f.sigma, "Asset volatility");
  cmd.add_option("--T", f.horizon, "Investment horizon");
  cmd.add_option("--tau", f.tau, "Entropy weight (0 = deterministic limit)");
  cmd.add_option("--w", f.target, "Target wealth");
  cmd.add_option("--m0", f.m0, "Prior mean of the Sharpe ratio");
  cmd.add_option("--P0", f.p0, "Prior variance of the Sharpe ratio");
  cmd.add_option("--x0", f.x0, "Initial discounted wealth");
  cmd.add_option("--quadrature-n", f.quadrature_n, "Simpson intervals for eta/zeta");
}

void apply_flags(const FlagValues& f, RunConfig& c) {
  if (f.sigma) c.params.sigma = *f.sigma;
  if (f.horizon) c.params.horizon_T = *f.horizon;
  if (f.tau) c.params.tau = *f.tau;
  if (f.target) c.params.target_w = *f.target;
  if (f.m0) c.params.prior_mean_m0 = *f.m0;
  if (f.p0) c.params.prior_var_P0 = *f.p0;
  if (f.x0) c.x0 = *f.x0;
  if (f.rho) c.rho = *f.rho;
  if (f.prior_sampled) c.prior_sampled = true;
  if (f.n_paths) c.n_paths = *f.n_paths;
  if (f.n_steps) c.n_steps = *f.n_steps;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out_dir = *f.out;
  if (f.quadrature_n) c.quadrature_n = *f.quadrature_n;
  if (f.mode) c.mode = bayesmv::cli::parse_mode_selection(*f.mode);
  if (f.t_points) c.heatmap_t_points = *f.t_points;
  if (f.m_points) c.heatmap_m_points = *f.m_points;
  if (f.m_max) c.m_max = *f.m_max;
  if (f.w_points) c.frontier_points = *f.w_points;
  if (f.w_span) c.frontier_span = *f.w_span;
  if (f.hjb_step) c.hjb_step = *f.hjb_step;
  if (f.foc_states) c.foc_states = *f.foc_states;
  if (f.alpha_fault) c.alpha_fault = *f.alpha_fault;
  if (f.randomized_sweep) c.randomized_sweep = true;
  if (f.sweep_draws) c.sweep_draws = *f.sweep_draws;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-regularized mean-variance control under Bayesian drift uncertainty"};
  app.require_subcommand(1);
  FlagValues flags;

  auto* paths = app.add_subcommand("paths", "Posterior-mean paths and policy variance along them");
  add_options(*paths, flags);
  paths->add_option("--rho", flags.rho, "True Sharpe ratio (default 1)");
  paths->add_flag("--prior-sampled", flags.prior_sampled, "Draw rho per path from the prior");

  auto* heatmap = app.add_subcommand("heatmap", "Policy variance over the (t, m) plane");
  add_options(*heatmap, flags);
  heatmap->add_option("--t-points", flags.t_points, "Time grid points (default 101)");
  heatmap->add_option("--m-points", flags.m_points, "Belief grid points (default 121)");
  heatmap->add_option("--m-max", flags.m_max, "Belief grid half-width (default 2)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo objective and martingale check");
  add_options(*simulate, flags);
  simulate->add_option("--mode", flags.mode, "innovation | physical | both");

  auto* frontier = app.add_subcommand("frontier", "Sweep the target w");
  add_options(*frontier, flags);
  frontier->add_option("--mode", flags.mode, "innovation | physical");
  frontier->add_option("--w-points", flags.w_points, "Number of targets (default 21)");
  frontier->add_option("--w-span", flags.w_span, "Targets span [x0, x0 + span] (default 2)");

  auto* verify = app.add_subcommand("verify", "Check every closed-form identity");
  add_options(*verify, flags);
  verify->add_option("--hjb-step", flags.hjb_step, "Finite-difference step in t and m, scaled by min(1, T) (default 1e-3)");
  verify->add_option("--foc-states", flags.foc_states, "Sampled policy states (default 20)");
  verify->add_option("--inject-alpha-fault", flags.alpha_fault,
                     "Test hook: add this constant to alpha in the Riccati check");
  verify->add_flag("--randomized-sweep", flags.randomized_sweep,
                   "Repeat the checks on random parameter draws");
  verify->add_option("--sweep-draws", flags.sweep_draws, "Number of draws (default 10)");
  verify->add_option("--m-max", flags.m_max, "Belief grid half-width for the conviction check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bayesmv::cli::kExitIoOrConfig;
  }

  RunConfig config = bayesmv::cli::default_config();
  try {
    if (flags.config_path) bayesmv::cli::apply_config_file(*flags.config_path, config);
    apply_flags(flags, config);
  } catch (const bayesmv::cli::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return bayesmv::cli::kExitIoOrConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return bayesmv::cli::run_command(name, config, std::cout, std::cerr);
}
