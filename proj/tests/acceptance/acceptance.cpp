// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "bayesmv/cli/commands.hpp"
#include "bayesmv/cli/config.hpp"
#include "bayesmv/coefficients.hpp"
#include "bayesmv/filter.hpp"
#include "bayesmv/montecarlo.hpp"
#include "bayesmv/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace bayesmv;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const ModelParams kDefaultParams{};  // sigma 0.2, T 1, tau 1, w 1, m0 0, P0 1

Outcome riccati() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  std::vector<ModelParams> sets{kDefaultParams};
  for (const auto& p : cli::random_parameter_draws(kDefaultParams, 10, 20240531)) sets.push_back(p);
  double worst = 0.0;
  for (const auto& p : sets) {
    for (const auto& r : riccati_residuals(p)) {
      worst = std::max(worst, r.max_abs_residual);
      out.require(r.passed, r.name + " " + fmt(r.max_abs_residual));
    }
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  out.note("max residual " + fmt(worst) + " over 11 parameter sets, " + fmt(elapsed) + " s");
  return out;
}

Outcome hjb() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const double steps[] = {4e-3, 2e-3, 1e-3};
  const auto conv = hjb_convergence(kDefaultParams, HjbGrid::standard(kDefaultParams), steps);
  const double elapsed = seconds_since(start);
  out.require(conv.max_residuals.back() < 1e-4, "residual " + fmt(conv.max_residuals.back()));
  out.require(conv.slope >= 1.7 && conv.slope <= 2.3, "slope " + fmt(conv.slope));
  out.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
  out.note("residual " + fmt(conv.max_residuals.back()) + " at h=1e-3, slope " +
           fmt(conv.slope) + ", " + fmt(elapsed) + " s");
  return out;
}

Outcome known_drift() {
  Outcome out;
  double worst = 0.0;
  for (const auto& r : limit_check_known_drift(kDefaultParams, 1e-10)) {
    worst = std::max(worst, r.max_abs_residual);
    out.require(r.passed, r.name + " " + fmt(r.max_abs_residual));
  }
  const double spot =
      optimal_policy(0.0, 0.0, 1.0, kDefaultParams.with_prior(0.0, 1e-10)).variance;
  out.require(std::abs(spot - 33.9785) < 1e-4, "spot variance " + fmt(spot));
  out.note("max deviation " + fmt(worst) + ", spot variance " + std::to_string(spot));
  return out;
}

Outcome deterministic() {
  Outcome out;
  const double taus[] = {1.0, 0.1, 0.01, 0.0};
  for (const auto& r : limit_check_deterministic(kDefaultParams, taus)) {
    out.require(r.passed, r.name + " " + fmt(r.max_abs_residual));
    out.note(r.name + " " + fmt(r.max_abs_residual));
  }
  return out;
}

Outcome conviction() {
  Outcome out;
  const auto ts = linspace(0.0, 1.0, 101);
  const auto ms = linspace(-2.0, 2.0, 121);
  for (const auto& r : conviction_check(kDefaultParams, ts, ms)) {
    out.require(r.passed, r.name + " " + fmt(r.max_abs_residual));
  }
  const double terminal = optimal_policy(1.0, 0.0, 1.3, kDefaultParams).variance;
  out.require(std::abs(terminal - 12.5) < 12.5e-12, "terminal variance " + fmt(terminal));
  out.note("101 x 121 grid, terminal variance " + fmt(terminal));
  return out;
}

Outcome objective() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const double closed = value(0.0, 0.0, 0.0, kDefaultParams);
  SimulationSettings s;
  s.n_paths = 100000;
  s.n_steps = 200;
  s.seed = 20240531;
  const auto innovation_run = simulate_controlled(kDefaultParams, s);
  s.mode = DrivingMode::physical;
  s.seed += 1;
  const auto physical_run = simulate_controlled(kDefaultParams, s);
  const Estimate a = estimate_objective(innovation_run);
  const Estimate b = estimate_objective(physical_run);
  const double elapsed = seconds_since(start);
  const double za = (a.estimate - closed) / a.std_error;
  const double zb = (b.estimate - closed) / b.std_error;
  const double zab = (a.estimate - b.estimate) / std::hypot(a.std_error, b.std_error);
  out.require(std::abs(za) < 3.0, "innovation z " + fmt(za));
  out.require(std::abs(zb) < 3.0, "physical z " + fmt(zb));
  out.require(std::abs(zab) < 3.0, "mode agreement z " + fmt(zab));
  out.require(innovation_run.quarantined + physical_run.quarantined == 0, "quarantined paths");
  out.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
  out.note("closed form " + fmt(closed) + ", innovation " + fmt(a.estimate) + " (z " + fmt(za) +
           "), physical " + fmt(b.estimate) + " (z " + fmt(zb) + "), agreement z " + fmt(zab) +
           ", " + fmt(elapsed) + " s");
  return out;
}

Outcome martingale() {
  Outcome out;
  const double closed = value(0.0, 0.0, 0.0, kDefaultParams);
  SimulationSettings s;
  s.n_paths = 400000;
  s.seed = 777;
  s.checkpoints = {0.5, 1.0};
  for (const auto& pt : martingale_diagnostic(kDefaultParams, s)) {
    const double z = (pt.mean - closed) / pt.std_error;
    out.require(std::abs(z) < 3.0, "optimal t=" + fmt(pt.t) + " z " + fmt(z));
    out.note("optimal t=" + fmt(pt.t) + " z " + fmt(z));
  }
  // The excess at T/2 is about 0.005, so the perturbed run needs more paths to clear 3 stderr.
  s.n_paths = 1600000;
  s.mean_scale = 1.5;
  for (const auto& pt : martingale_diagnostic(kDefaultParams, s)) {
    const double z = (pt.mean - closed) / pt.std_error;
    out.require(z > 3.0, "perturbed t=" + fmt(pt.t) + " z " + fmt(z));
    out.note("perturbed t=" + fmt(pt.t) + " z " + fmt(z));
  }
  return out;
}

Outcome filter_statistics() {
  Outcome out;
  const auto terminal = simulate_filter_terminal(kDefaultParams, PriorSampled{}, 100000, 200, 99);
  const double n = static_cast<double>(terminal.size());
  double mean = 0.0;
  for (double v : terminal) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : terminal) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  const double var = m2 / (n - 1.0);
  const double var_se = std::sqrt((m4 / n - var * var) / n);
  const double mean_se = std::sqrt(var / n);
  const double target = 1.0 - posterior_variance(1.0, 1.0);
  const double z_var = (var - target) / var_se;
  const double z_mean = mean / mean_se;
  out.require(std::abs(z_var) < 3.0, "variance z " + fmt(z_var));
  out.require(std::abs(z_mean) < 3.0, "mean z " + fmt(z_mean));
  out.note("Var(m_T) " + fmt(var) + " (z " + fmt(z_var) + "), E[m_T] " + fmt(mean) + " (z " +
           fmt(z_mean) + ")");
  return out;
}

Outcome gaussian_foc() {
  Outcome out;
  const auto states = sample_policy_states(kDefaultParams, 20, 20240531);
  for (const auto& r : gaussian_foc_check(kDefaultParams, states)) {
    out.require(r.passed, r.name + " " + fmt(r.max_abs_residual));
    if (r.name == "gaussian_foc_mean" || r.name == "gaussian_foc_variance") {
      out.note(r.name + " rel " + fmt(r.max_abs_residual));
    }
  }
  return out;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome out;
  const fs::path root = fs::temp_directory_path() / "bayesmv_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> files;
  std::ostringstream sink;
  for (const char* run : {"a", "b"}) {
    cli::RunConfig config = cli::default_config();
    config.out_dir = root / run;
    config.n_paths = 2000;
    config.prior_sampled = true;
    cli::run_command("paths", config, sink, sink);
    cli::run_command("heatmap", config, sink, sink);
    config.mode = cli::ModeSelection::both;
    cli::run_command("simulate", config, sink, sink);
    config.mode = cli::ModeSelection::innovation;
    cli::run_command("frontier", config, sink, sink);
    cli::run_command("verify", config, sink, sink);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const auto name = entry.path().filename();
    const auto other = root / "b" / name;
    out.require(fs::exists(other), "missing " + name.string());
    if (fs::exists(other)) {
      out.require(slurp(entry.path()) == slurp(other), name.string() + " differs");
      ++compared;
    }
  }
  out.require(compared >= 7, "only " + std::to_string(compared) + " CSVs written");
  out.note(std::to_string(compared) + " CSVs byte-identical across reruns");
  fs::remove_all(root);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"riccati_ode_residuals", riccati}, {"hjb_residual", hjb},
      {"known_drift_limit", known_drift}, {"deterministic_limit", deterministic},
      {"conviction", conviction},         {"monte_carlo_objective", objective},
      {"martingale", martingale},         {"filter_statistics", filter_statistics},
      {"gaussian_foc", gaussian_foc},     {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.passed) ++failures;
    std::cout << (outcome.passed ? "PASS" : "FAIL") << " [" << (i + 1) << "] "
              << criteria[i].name << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
