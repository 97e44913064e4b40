#include "bayesmv/filter.hpp"

#include "bayesmv/coefficients.hpp"
#include "bayesmv/parallel.hpp"
#include "bayesmv/random.hpp"

#include <cmath>
#include <span>

namespace bayesmv {

namespace {

void check_sizes(std::size_t n_paths, std::size_t n_steps) {
  if (n_paths == 0) throw DomainError("n_paths must be at least 1");
  if (n_steps == 0) throw DomainError("n_steps must be at least 1");
}

double draw_rho(const FilterMode& mode, const ModelParams& params, PathStream& stream) {
  if (const auto* fixed = std::get_if<FixedRho>(&mode)) {
    if (!std::isfinite(fixed->rho)) throw DomainError("fixed rho must be finite");
    return fixed->rho;
  }
  return stream.normal(params.prior_mean_m0, std::sqrt(params.prior_var_P0));
}

// Runs one path; `record` sees (step index, m) for every grid point.
template <class Record>
double run_path(const ModelParams& params, const FilterMode& mode,
                std::span<const double> left_variance, double dt, std::uint64_t seed,
                std::size_t path, Record&& record) {
  PathStream stream(seed, path);
  const double rho = draw_rho(mode, params, stream);
  const double sqrt_dt = std::sqrt(dt);
  double m = params.prior_mean_m0;
  record(0, m);
  for (std::size_t k = 0; k < left_variance.size(); ++k) {
    const double dY = rho * dt + sqrt_dt * stream.normal();
    m += left_variance[k] * (dY - m * dt);
    record(k + 1, m);
  }
  return rho;
}

std::vector<double> left_variances(const ModelParams& params, std::span<const double> times) {
  std::vector<double> out(times.size() - 1);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    out[k] = posterior_variance(times[k], params.prior_var_P0);
  }
  return out;
}

}  // namespace

std::vector<double> uniform_time_grid(double horizon, std::size_t n_steps) {
  if (n_steps == 0) throw DomainError("time grid needs at least one step");
  std::vector<double> times(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    times[k] = horizon * static_cast<double>(k) / static_cast<double>(n_steps);
  }
  times.back() = horizon;
  return times;
}

double filter_step(double m, double t, double dY, double dt, double P0) {
  if (!(dt > 0.0)) throw DomainError("filter_step: dt must be positive");
  return m + posterior_variance(t, P0) * (dY - m * dt);
}

FilterEnsemble simulate_filter_paths(const ModelParams& params, const FilterMode& mode,
                                     std::size_t n_paths, std::size_t n_steps,
                                     std::uint64_t seed) {
  params.validate();
  check_sizes(n_paths, n_steps);
  FilterEnsemble ensemble;
  ensemble.times = uniform_time_grid(params.horizon_T, n_steps);
  const auto variances = left_variances(params, ensemble.times);
  const double dt = params.horizon_T / static_cast<double>(n_steps);
  ensemble.paths.resize(n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    FilterPath& path = ensemble.paths[p];
    path.m_values.resize(n_steps + 1);
    path.rho_true = run_path(params, mode, variances, dt, seed, p,
                             [&](std::size_t k, double m) { path.m_values[k] = m; });
  });
  return ensemble;
}

std::vector<double> simulate_filter_terminal(const ModelParams& params,
                                             const FilterMode& mode, std::size_t n_paths,
                                             std::size_t n_steps, std::uint64_t seed) {
  params.validate();
  check_sizes(n_paths, n_steps);
  const auto times = uniform_time_grid(params.horizon_T, n_steps);
  const auto variances = left_variances(params, times);
  const double dt = params.horizon_T / static_cast<double>(n_steps);
  std::vector<double> terminal(n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    run_path(params, mode, variances, dt, seed, p, [&](std::size_t k, double m) {
      if (k == n_steps) terminal[p] = m;
    });
  });
  return terminal;
}

}  // namespace bayesmv
