#include "bayesmv/cli/commands.hpp"

#include "bayesmv/cli/csv.hpp"
#include "bayesmv/coefficients.hpp"
#include "bayesmv/filter.hpp"
#include "bayesmv/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

namespace bayesmv::cli {

namespace {

QuadratureOptions quadrature(const RunConfig& config) { return {config.quadrature_n}; }

std::vector<DrivingMode> selected_modes(ModeSelection selection) {
  switch (selection) {
    case ModeSelection::innovation: return {DrivingMode::innovation};
    case ModeSelection::physical: return {DrivingMode::physical};
    case ModeSelection::both: return {DrivingMode::innovation, DrivingMode::physical};
  }
  return {};
}

SimulationSettings settings_for(const RunConfig& config, std::size_t default_paths) {
  SimulationSettings s;
  s.x0 = config.x0;
  s.n_paths = config.paths_or(default_paths);
  s.n_steps = config.steps_or(kDefaultSteps);
  s.seed = config.seed;
  return s;
}

std::string_view pass_text(bool passed) { return passed ? "true" : "false"; }

}  // namespace

double z_score(double difference, double std_error) {
  if (std_error > 0.0) return difference / std_error;
  if (difference == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), difference);
}

int cmd_paths(const RunConfig& config, std::ostream& log) {
  const ModelParams& p = config.params;
  p.validate();
  const FilterMode mode = config.prior_sampled ? FilterMode{PriorSampled{}}
                                               : FilterMode{FixedRho{config.rho}};
  const FilterEnsemble ensemble =
      simulate_filter_paths(p, mode, config.paths_or(kPathsDefaultPaths),
                            config.steps_or(kDefaultSteps), config.seed);
  ensure_directory(config.out_dir);
  const auto file = config.out_dir / "paths.csv";
  CsvWriter csv(file, {"path_id", "t", "m", "policy_variance"});
  for (std::size_t id = 0; id < ensemble.paths.size(); ++id) {
    const auto& path = ensemble.paths[id];
    for (std::size_t k = 0; k < ensemble.times.size(); ++k) {
      const double t = ensemble.times[k];
      const double m = path.m_values[k];
      csv.row({static_cast<std::uint64_t>(id), t, m,
               optimal_policy(t, config.x0, m, p).variance});
    }
  }
  csv.close();
  log << "wrote " << file.string() << " (" << ensemble.paths.size() << " paths x "
      << ensemble.times.size() << " points)\n";
  return kExitSuccess;
}

int cmd_heatmap(const RunConfig& config, std::ostream& log) {
  const ModelParams& p = config.params;
  p.validate();
  const auto ts = linspace(0.0, p.horizon_T, config.heatmap_t_points);
  const auto ms = linspace(-config.m_max, config.m_max, config.heatmap_m_points);
  ensure_directory(config.out_dir);
  const auto file = config.out_dir / "heatmap.csv";
  CsvWriter csv(file, {"t", "m", "policy_variance"});
  for (double t : ts) {
    for (double m : ms) csv.row({t, m, optimal_policy(t, config.x0, m, p).variance});
  }
  csv.close();
  log << "wrote " << file.string() << " (" << ts.size() << " x " << ms.size() << ")\n";
  return kExitSuccess;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const ModelParams& p = config.params;
  p.validate();
  const auto quad = quadrature(config);
  const bool deterministic = p.tau == 0.0;
  const double closed_form =
      value(0.0, config.x0, p.prior_mean_m0, p, deterministic, quad);

  SimulationSettings base = settings_for(config, kSimulateDefaultPaths);
  const double dt = p.horizon_T / static_cast<double>(base.n_steps);
  const double half = std::round(0.5 * static_cast<double>(base.n_steps)) * dt;
  base.checkpoints = {0.0, half, p.horizon_T};

  ensure_directory(config.out_dir);
  CsvWriter objective(config.out_dir / "objective.csv",
                      {"estimate", "stderr", "closed_form_value", "z_score"});
  CsvWriter martingale(config.out_dir / "martingale.csv",
                       {"mode", "t", "mean", "stderr", "closed_form_value", "z_score"});

  bool ok = true;
  std::vector<Estimate> estimates;
  for (DrivingMode mode : selected_modes(config.mode)) {
    SimulationSettings s = base;
    s.mode = mode;
    // Physical mode gets its own stream so the two representations are independent.
    if (mode == DrivingMode::physical) s.seed = config.seed + 1;
    const PathEnsemble ensemble = simulate_controlled(p, s);
    const Estimate est = estimate_objective(ensemble);
    const double z = z_score(est.estimate - closed_form, est.std_error);
    objective.row({est.estimate, est.std_error, closed_form, z});
    estimates.push_back(est);
    log << to_string(mode) << ": objective " << format_double(est.estimate) << " +/- "
        << format_double(est.std_error) << ", closed form " << format_double(closed_form)
        << ", z = " << format_double(z) << ", quarantined " << ensemble.quarantined << '\n';
    ok = ok && std::abs(z) <= 3.0 && ensemble.quarantined == 0;

    for (const MartingalePoint& point : martingale_from_ensemble(p, ensemble, quad)) {
      martingale.row({to_string(mode), point.t, point.mean, point.std_error, closed_form,
                      z_score(point.mean - closed_form, point.std_error)});
    }
  }
  objective.close();
  martingale.close();

  if (estimates.size() == 2) {
    const double diff = estimates[0].estimate - estimates[1].estimate;
    const double combined = std::hypot(estimates[0].std_error, estimates[1].std_error);
    const double z = z_score(diff, combined);
    CsvWriter agreement(config.out_dir / "mode_agreement.csv",
                        {"difference", "combined_stderr", "z_score"});
    agreement.row({diff, combined, z});
    agreement.close();
    log << "mode agreement: z = " << format_double(z) << '\n';
    ok = ok && std::abs(z) <= 3.0;
  }
  return ok ? kExitSuccess : kExitCheckFailed;
}

int cmd_frontier(const RunConfig& config, std::ostream& log) {
  const ModelParams& p = config.params;
  p.validate();
  if (config.mode == ModeSelection::both) {
    throw ConfigError("frontier runs a single driving mode; pick innovation or physical");
  }
  SimulationSettings s = settings_for(config, kFrontierDefaultPaths);
  s.mode = selected_modes(config.mode).front();
  const auto w_grid =
      linspace(config.x0, config.x0 + config.frontier_span, config.frontier_points);
  const auto rows = frontier_sweep(p, s, w_grid);
  ensure_directory(config.out_dir);
  const auto file = config.out_dir / "frontier.csv";
  CsvWriter csv(file, {"w", "mean_terminal", "std_terminal", "stderr_mean"});
  for (const FrontierRow& r : rows) csv.row({r.w, r.mean_terminal, r.std_terminal, r.stderr_mean});
  csv.close();
  log << "wrote " << file.string() << " (" << rows.size() << " targets)\n";
  return kExitSuccess;
}

std::vector<ModelParams> random_parameter_draws(const ModelParams& base, std::size_t count,
                                                std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  };
  std::vector<ModelParams> draws;
  for (std::size_t i = 0; i < count; ++i) {
    ModelParams p = base;
    p.sigma = uniform(0.05, 0.5);
    p.horizon_T = uniform(0.25, 4.0);
    p.tau = uniform(0.1, 4.0);
    p.prior_var_P0 = uniform(0.0, 4.0);
    p.prior_mean_m0 = uniform(-2.0, 2.0);
    draws.push_back(p);
  }
  return draws;
}

std::vector<ResidualReport> verification_suite(const ModelParams& params,
                                               const RunConfig& config) {
  params.validate();
  if (!(params.tau > 0.0)) throw ConfigError("verify needs tau > 0");
  const auto quad = quadrature(config);
  std::vector<ResidualReport> all;
  auto append = [&](std::vector<ResidualReport> reports) {
    for (auto& r : reports) all.push_back(std::move(r));
  };

  RiccatiOptions riccati;
  riccati.quad = quad;
  riccati.alpha_fault = config.alpha_fault;
  append(riccati_residuals(params, riccati));

  const HjbGrid grid = HjbGrid::standard(params);
  // Step relative to the horizon for T < 1; unchanged at T >= 1.
  const double h = config.hjb_step * std::min(1.0, params.horizon_T);
  const double steps[] = {4.0 * h, 2.0 * h, h};
  const HjbConvergence conv = hjb_convergence(params, grid, steps, quad);
  all.push_back(ResidualReport::make("hjb_residual", grid.t.size() * grid.m.size() * grid.x.size(),
                                     conv.max_residuals.back(), kPdeTolerance));
  all.push_back(hjb_order_report(conv));

  append(limit_check_known_drift(params, 1e-10));
  const double taus[] = {params.tau, params.tau / 10.0, params.tau / 100.0, 0.0};
  append(limit_check_deterministic(params, taus));

  const auto states = sample_policy_states(params, config.foc_states, config.seed);
  append(gaussian_foc_check(params, states, 4001, quad));

  const auto ts = linspace(0.0, params.horizon_T, config.heatmap_t_points);
  const auto ms = linspace(-config.m_max, config.m_max, config.heatmap_m_points);
  append(conviction_check(params, ts, ms));
  return all;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  std::vector<std::pair<std::string, ModelParams>> runs{{"", config.params}};
  if (config.randomized_sweep) {
    const auto draws = random_parameter_draws(config.params, config.sweep_draws, config.seed);
    for (std::size_t i = 0; i < draws.size(); ++i) {
      runs.emplace_back("@draw" + std::to_string(i), draws[i]);
    }
  }
  ensure_directory(config.out_dir);
  const auto file = config.out_dir / "verify.csv";
  CsvWriter csv(file, {"name", "grid_size", "max_abs_residual", "tolerance", "passed"});
  std::size_t failures = 0, total = 0;
  for (const auto& [suffix, params] : runs) {
    for (const ResidualReport& r : verification_suite(params, config)) {
      const std::string name = r.name + suffix;
      csv.row({std::string_view(name), static_cast<std::uint64_t>(r.grid_size),
               r.max_abs_residual, r.tolerance, pass_text(r.passed)});
      ++total;
      if (!r.passed) {
        ++failures;
        log << "FAIL " << name << ": " << format_double(r.max_abs_residual)
            << " >= " << format_double(r.tolerance) << '\n';
      }
    }
  }
  csv.close();
  log << (total - failures) << "/" << total << " checks passed; wrote " << file.string() << '\n';
  return failures == 0 ? kExitSuccess : kExitCheckFailed;
}

int run_command(std::string_view name, const RunConfig& config, std::ostream& log,
                std::ostream& err) {
  try {
    if (name == "paths") return cmd_paths(config, log);
    if (name == "heatmap") return cmd_heatmap(config, log);
    if (name == "simulate") return cmd_simulate(config, log);
    if (name == "frontier") return cmd_frontier(config, log);
    if (name == "verify") return cmd_verify(config, log);
    err << "unknown command '" << name << "'\n";
    return kExitIoOrConfig;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoOrConfig;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitIoOrConfig;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitIoOrConfig;
  }
}

}  // namespace bayesmv::cli
