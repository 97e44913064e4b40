#include "bayesmv/verify.hpp"

#include "bayesmv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace bayesmv {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double five_point_derivative(F&& f, double t, double h) {
  return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
}

ResidualReport violation_report(std::string name, std::size_t grid_size,
                                std::size_t violations) {
  // Counts pass only when zero.
  return ResidualReport::make(std::move(name), grid_size, static_cast<double>(violations), 1.0);
}

bool is_terminal(double t, double horizon) { return std::abs(t - horizon) <= kTimeClampSlack; }

// Value at the nine stencil points around (x, m) for one time slice; t and m
// use step h, x uses kWealthStep.
HjbTerms terms_from(const ModelParams& p, const CoefficientSet& before,
                    const CoefficientSet& now, const CoefficientSet& after, double x, double m,
                    double h) {
  const double w = p.target_w;
  const double hx = kWealthStep;
  auto v = [&](double dx, double dm) { return now.value(x + dx, m + dm, w); };
  const double v0 = v(0, 0);
  const double v_t = (after.value(x, m, w) - before.value(x, m, w)) / (2.0 * h);
  const double v_x = (v(hx, 0) - v(-hx, 0)) / (2.0 * hx);
  const double v_xx = (v(hx, 0) - 2.0 * v0 + v(-hx, 0)) / (hx * hx);
  const double v_mm = (v(0, h) - 2.0 * v0 + v(0, -h)) / (h * h);
  const double v_xm = (v(hx, h) - v(hx, -h) - v(-hx, h) + v(-hx, -h)) / (4.0 * hx * h);

  HjbTerms terms;
  const double P = now.posterior_var;
  terms.v_xx = v_xx;
  terms.time_derivative = v_t;
  terms.diffusion = 0.5 * P * P * v_mm;
  if (!(v_xx > 0.0)) return terms;
  const double g = m * v_x + P * v_xm;
  terms.control = -g * g / (2.0 * v_xx);
  terms.entropy = -0.5 * p.tau * std::log(2.0 * kPi * p.tau / (p.sigma * p.sigma * v_xx));
  terms.residual = terms.time_derivative + terms.diffusion + terms.control + terms.entropy;
  return terms;
}

void check_hjb_step(const ModelParams& params, double t, double h) {
  if (!(h > 0.0)) throw DomainError("hjb: step h must be positive");
  if (t - h < 0.0 || t + h > params.horizon_T) {
    throw DomainError("hjb: t +/- h must stay inside [0, T] (t = " + std::to_string(t) + ")");
  }
  if (!(params.tau > 0.0)) throw DomainError("hjb: the reduced HJB needs tau > 0");
}

double relative_error(double numeric, double reference, double floor) {
  return std::abs(numeric - reference) / std::max(std::abs(reference), floor);
}

// Phi restricted to Gaussian policies, parameterized by (mean, log variance).
struct GaussianPhi {
  double sigma;
  double tau;
  double g;     // m V_x + P V_xm
  double v_xx;

  double moment_part(double u, double variance) const {
    return sigma * u * g + 0.5 * sigma * sigma * (u * u + variance) * v_xx;
  }
  double operator()(double u, double log_var) const {
    const double h = -0.5 * (std::log(2.0 * kPi) + 1.0 + log_var);
    return moment_part(u, std::exp(log_var)) + tau * h;
  }
};

// int p log p over a wide window, trapezoid rule.
template <class Density>
double negative_entropy(Density&& density, double center, double spread, std::size_t n) {
  const double half_width = 12.0 * spread;
  const double lo = center - half_width;
  const double step = 2.0 * half_width / static_cast<double>(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = density(lo + static_cast<double>(i) * step);
    const double term = p > 0.0 ? p * std::log(p) : 0.0;
    sum += (i == 0 || i + 1 == n) ? 0.5 * term : term;
  }
  return sum * step;
}

double normal_pdf(double u, double mean, double variance) {
  const double z = u - mean;
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * kPi * variance);
}

}  // namespace

ResidualReport ResidualReport::make(std::string name, std::size_t grid_size, double residual,
                                    double tolerance) {
  ResidualReport report;
  report.name = std::move(name);
  report.grid_size = grid_size;
  report.max_abs_residual = residual;
  report.tolerance = tolerance;
  report.passed = residual < tolerance;
  return report;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  // Weighted form keeps grids over [-a, a] exactly symmetric.
  std::vector<double> out(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double k = static_cast<double>(i);
    out[i] = (lo * (n - k) + hi * k) / n;
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<ResidualReport> riccati_residuals(const ModelParams& params,
                                              const RiccatiOptions& options) {
  params.validate();
  if (options.n_grid < 10) throw DomainError("riccati_residuals: n_grid must be at least 10");
  const double T = params.horizon_T;
  const double h = options.fd_step;
  if (!(h > 0.0) || 4.0 * h >= T) throw DomainError("riccati_residuals: bad step size");
  const double P0 = params.prior_var_P0;
  const double tau = params.tau;
  const double fault = options.alpha_fault;
  const auto grid = linspace(2.0 * h, T - 2.0 * h, options.n_grid);

  auto alpha_f = [&](double t) { return alpha(t, params) + fault; };
  auto gamma_f = [&](double t) { return gamma(t, params); };
  auto eta_f = [&](double t) { return eta(t, params, options.quad); };
  auto zeta_f = [&](double t) { return zeta(t, params, options.quad); };
  const bool entropic = tau > 0.0;
  const double log_term = entropic ? std::log(kPi * tau / (params.sigma * params.sigma)) : 0.0;

  double r_alpha = 0.0, r_gamma = 0.0, r_eta = 0.0, r_zeta = 0.0;
  for (double t : grid) {
    const double P = posterior_variance(t, P0);
    const double a = alpha_f(t);
    r_alpha = std::max(r_alpha, std::abs(five_point_derivative(alpha_f, t, h) -
                                         (1.0 + 4.0 * P * a + 2.0 * P * P * a * a)));
    r_gamma = std::max(r_gamma, std::abs(five_point_derivative(gamma_f, t, h) + P * P * a));
    if (entropic) {
      r_eta = std::max(r_eta, std::abs(five_point_derivative(eta_f, t, h) + 0.5 * tau * a));
      const double rhs = 0.5 * tau * (log_term - gamma_f(t)) - P * P * eta_f(t);
      r_zeta = std::max(r_zeta, std::abs(five_point_derivative(zeta_f, t, h) - rhs));
    }
  }
  std::vector<ResidualReport> reports;
  reports.push_back(ResidualReport::make("alpha_riccati", grid.size(), r_alpha, kOdeTolerance));
  reports.push_back(ResidualReport::make("gamma_ode", grid.size(), r_gamma, kOdeTolerance));
  if (entropic) {
    reports.push_back(ResidualReport::make("eta_ode", grid.size(), r_eta, kOdeTolerance));
    reports.push_back(ResidualReport::make("zeta_ode", grid.size(), r_zeta, kOdeTolerance));
  }
  return reports;
}

HjbGrid HjbGrid::standard(const ModelParams& params, std::size_t points) {
  const double T = params.horizon_T;
  return {linspace(0.1 * T, 0.9 * T, points), linspace(-2.0, 2.0, points),
          linspace(-1.0, 3.0, points)};
}

HjbTerms hjb_terms(const ModelParams& params, double t, double x, double m, double h,
                   const QuadratureOptions& quad) {
  params.validate();
  check_hjb_step(params, t, h);
  const auto before = CoefficientSet::at(t - h, params, quad);
  const auto now = CoefficientSet::at(t, params, quad);
  const auto after = CoefficientSet::at(t + h, params, quad);
  return terms_from(params, before, now, after, x, m, h);
}

ResidualReport hjb_residual(const ModelParams& params, const HjbGrid& grid, double h,
                            const QuadratureOptions& quad) {
  params.validate();
  double worst = 0.0;
  for (double t : grid.t) {
    check_hjb_step(params, t, h);
    const auto before = CoefficientSet::at(t - h, params, quad);
    const auto now = CoefficientSet::at(t, params, quad);
    const auto after = CoefficientSet::at(t + h, params, quad);
    for (double m : grid.m) {
      for (double x : grid.x) {
        const HjbTerms terms = terms_from(params, before, now, after, x, m, h);
        if (!(terms.v_xx > 0.0)) {
          throw VerificationError("hjb_residual: V_xx = " + std::to_string(terms.v_xx) +
                                  " <= 0 at t = " + std::to_string(t) +
                                  ", x = " + std::to_string(x) + ", m = " + std::to_string(m));
        }
        worst = std::max(worst, std::abs(terms.residual));
      }
    }
  }
  return ResidualReport::make("hjb_residual", grid.t.size() * grid.m.size() * grid.x.size(),
                              worst, kPdeTolerance);
}

HjbConvergence hjb_convergence(const ModelParams& params, const HjbGrid& grid,
                               std::span<const double> steps, const QuadratureOptions& quad) {
  if (steps.size() < 2) throw DomainError("hjb_convergence: need at least two step sizes");
  HjbConvergence out;
  out.steps.assign(steps.begin(), steps.end());
  for (double h : steps) out.max_residuals.push_back(hjb_residual(params, grid, h, quad).max_abs_residual);
  // Least-squares slope of log(residual) against log(h).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double lx = std::log(out.steps[i]);
    const double ly = std::log(out.max_residuals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

ResidualReport hjb_order_report(const HjbConvergence& convergence) {
  const double deviation = std::isfinite(convergence.slope)
                               ? std::abs(convergence.slope - 2.0)
                               : std::numeric_limits<double>::infinity();
  return ResidualReport::make("hjb_convergence_order", convergence.steps.size(), deviation, 0.3);
}

std::vector<PolicyState> sample_policy_states(const ModelParams& params, std::size_t count,
                                              std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PolicyState> states(count);
  for (auto& s : states) {
    s.t = 0.95 * params.horizon_T * unit(engine);
    s.x = -1.0 + 4.0 * unit(engine);
    s.m = -2.0 + 4.0 * unit(engine);
  }
  return states;
}

FocResult minimize_gaussian_phi(const ModelParams& params, const PolicyState& state,
                                std::size_t n_quadrature, const QuadratureOptions& quad) {
  params.validate();
  if (!(params.tau > 0.0)) throw DomainError("gaussian_foc_check needs tau > 0");
  if (!(state.t < params.horizon_T)) throw DomainError("gaussian_foc_check needs t < T");
  if (n_quadrature < 101) throw DomainError("gaussian_foc_check: n_quadrature too small");

  const double h = 1e-4;
  const double w = params.target_w;
  const auto coeffs = CoefficientSet::at(state.t, params, quad);
  const double hx = kWealthStep;
  auto v = [&](double dx, double dm) { return coeffs.value(state.x + dx, state.m + dm, w); };
  const double v_x = (v(hx, 0) - v(-hx, 0)) / (2.0 * hx);
  const double v_xx = (v(hx, 0) - 2.0 * v(0, 0) + v(-hx, 0)) / (hx * hx);
  const double v_xm = (v(hx, h) - v(hx, -h) - v(-hx, h) + v(-hx, -h)) / (4.0 * hx * h);
  const GaussianPhi phi{params.sigma, params.tau, state.m * v_x + coeffs.posterior_var * v_xm,
                        v_xx};

  FocResult result;
  result.state = state;
  if (!(v_xx > 0.0)) return result;

  // Damped Newton; the Hessian in (u, log var) is diagonal.
  double u = 0.0;
  double s = 0.0;
  double current = phi(u, s);
  const double s2 = phi.sigma * phi.sigma;
  for (std::size_t it = 1; it <= 500; ++it) {
    result.iterations = it;
    const double grad_u = phi.sigma * phi.g + s2 * u * v_xx;
    const double grad_s = 0.5 * s2 * std::exp(s) * v_xx - 0.5 * phi.tau;
    const double step_u = -grad_u / (s2 * v_xx);
    const double step_s = -grad_s / (0.5 * s2 * std::exp(s) * v_xx);
    double lambda = 1.0;
    double trial = phi(u + step_u, s + step_s);
    const double decrease = grad_u * step_u + grad_s * step_s;
    while (!(trial <= current + 1e-4 * lambda * decrease) && lambda > 1e-12) {
      lambda *= 0.5;
      trial = phi(u + lambda * step_u, s + lambda * step_s);
    }
    u += lambda * step_u;
    s += lambda * step_s;
    current = trial;
    if (std::abs(lambda * step_u) <= 1e-15 * (1.0 + std::abs(u)) &&
        std::abs(lambda * step_s) <= 1e-15 * (1.0 + std::abs(s))) {
      result.converged = true;
      break;
    }
    if (lambda == 1.0 && std::abs(step_u) < 1e-13 * (1.0 + std::abs(u)) &&
        std::abs(step_s) < 1e-13) {
      result.converged = true;
      break;
    }
  }
  result.mean = u;
  result.variance = std::exp(s);
  result.phi = current;

  const GaussianPolicy closed = optimal_policy(state.t, state.x, state.m, params);
  result.phi_closed_form = phi(closed.mean_position, std::log(closed.variance));

  // Same mean and variance, two components: entropy must be strictly lower.
  const double spread = std::sqrt(result.variance);
  const double offset = 0.6 * spread;
  const double inner_var = result.variance - offset * offset;
  const double h_gauss = negative_entropy(
      [&](double x) { return normal_pdf(x, u, result.variance); }, u, spread, n_quadrature);
  const double h_mix = negative_entropy(
      [&](double x) {
        return 0.5 * normal_pdf(x, u - offset, inner_var) +
               0.5 * normal_pdf(x, u + offset, inner_var);
      },
      u, spread, n_quadrature);
  result.phi_mixture_excess = phi.tau * (h_mix - h_gauss);
  return result;
}

std::vector<ResidualReport> gaussian_foc_check(const ModelParams& params,
                                               std::span<const PolicyState> states,
                                               std::size_t n_quadrature,
                                               const QuadratureOptions& quad) {
  double mean_err = 0.0, var_err = 0.0, gap = 0.0;
  std::size_t not_converged = 0, mixture_failures = 0;
  for (const PolicyState& state : states) {
    const FocResult r = minimize_gaussian_phi(params, state, n_quadrature, quad);
    if (!r.converged) {
      ++not_converged;
      continue;
    }
    const GaussianPolicy closed = optimal_policy(state.t, state.x, state.m, params);
    mean_err = std::max(mean_err, relative_error(r.mean, closed.mean_position, 1e-3));
    var_err = std::max(var_err, relative_error(r.variance, closed.variance, 1e-300));
    gap = std::max(gap, (r.phi_closed_form - r.phi) / (1.0 + std::abs(r.phi)));
    if (!(r.phi_mixture_excess > 0.0)) ++mixture_failures;
  }
  const std::size_t n = states.size();
  return {
      violation_report("gaussian_foc_convergence", n, not_converged),
      ResidualReport::make("gaussian_foc_mean", n, mean_err, kPdeTolerance),
      ResidualReport::make("gaussian_foc_variance", n, var_err, kPdeTolerance),
      ResidualReport::make("gaussian_foc_closed_form_is_argmin", n, std::max(gap, 0.0), 1e-9),
      violation_report("gaussian_entropy_dominance", n, mixture_failures),
  };
}

std::vector<ResidualReport> limit_check_known_drift(const ModelParams& params_base,
                                                    double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("known-drift limit: epsilon must be non-negative");
  const ModelParams p = params_base.with_prior(params_base.prior_mean_m0, epsilon);
  p.validate();
  const double T = p.horizon_T;
  const auto ts = linspace(0.0, T, 11);
  const auto ms = linspace(-2.0, 2.0, 9);
  const auto xs = linspace(-1.0, 3.0, 9);
  const double base = p.tau / (2.0 * p.sigma * p.sigma);
  double mean_dev = 0.0, var_dev = 0.0;
  for (double t : ts) {
    for (double m : ms) {
      for (double x : xs) {
        const GaussianPolicy policy = optimal_policy(t, x, m, p);
        mean_dev = std::max(mean_dev,
                            std::abs(policy.mean_position + (m / p.sigma) * (x - p.target_w)));
        // Absolute below 1, relative above: e^{m^2 (T-t)} spans many decades.
        const double reference = base * std::exp(m * m * (T - t));
        var_dev = std::max(var_dev,
                           std::abs(policy.variance - reference) / std::max(1.0, reference));
      }
    }
  }
  const std::size_t n = ts.size() * ms.size() * xs.size();
  return {ResidualReport::make("known_drift_mean", n, mean_dev, kPdeTolerance),
          ResidualReport::make("known_drift_variance", n, var_dev, kPdeTolerance)};
}

std::vector<ResidualReport> limit_check_deterministic(const ModelParams& params_base,
                                                      std::span<const double> tau_sequence) {
  if (tau_sequence.empty()) throw DomainError("deterministic limit: empty tau sequence");
  const double T = params_base.horizon_T;
  const auto ts = linspace(0.0, T, 11);
  const auto ms = linspace(-2.0, 2.0, 9);
  const auto xs = linspace(-1.0, 3.0, 9);
  double mean_dev = 0.0, ratio_spread = 0.0, zero_var = 0.0;
  for (double t : ts) {
    for (double m : ms) {
      for (double x : xs) {
        const double mean_ref = optimal_policy(t, x, m, params_base.with_tau(tau_sequence[0]))
                                    .mean_position;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double tau : tau_sequence) {
          const GaussianPolicy policy = optimal_policy(t, x, m, params_base.with_tau(tau));
          mean_dev = std::max(mean_dev, std::abs(policy.mean_position - mean_ref));
          if (tau > 0.0) {
            lo = std::min(lo, policy.variance / tau);
            hi = std::max(hi, policy.variance / tau);
          }
        }
        if (hi >= lo) ratio_spread = std::max(ratio_spread, (hi - lo) / (0.5 * (hi + lo)));
        zero_var = std::max(zero_var, std::abs(optimal_policy(t, x, m, params_base.with_tau(0.0))
                                                   .variance));
      }
    }
  }
  const std::size_t n = ts.size() * ms.size() * xs.size();
  return {ResidualReport::make("deterministic_mean_tau_invariant", n, mean_dev, kExact),
          ResidualReport::make("deterministic_variance_linear_in_tau", n, ratio_spread, 1e-10),
          ResidualReport::make("deterministic_zero_variance", n, zero_var, kExact)};
}

std::vector<ResidualReport> conviction_check(const ModelParams& params,
                                             std::span<const double> t_grid,
                                             std::span<const double> m_grid) {
  params.validate();
  if (!(params.tau > 0.0)) throw DomainError("conviction_check needs tau > 0");
  const double T = params.horizon_T;
  const double base = params.tau / (2.0 * params.sigma * params.sigma);
  auto variance = [&](double t, double m) { return optimal_policy(t, 0.0, m, params).variance; };

  std::vector<double> magnitudes;
  for (double m : m_grid) magnitudes.push_back(std::abs(m));
  std::sort(magnitudes.begin(), magnitudes.end());
  magnitudes.erase(std::unique(magnitudes.begin(), magnitudes.end()), magnitudes.end());

  double asymmetry = 0.0, derivative_err = 0.0, terminal_dev = 0.0;
  std::size_t min_violations = 0, monotone_violations = 0;
  bool has_terminal_row = false;
  for (double t : t_grid) {
    const bool terminal = is_terminal(t, T);
    has_terminal_row = has_terminal_row || terminal;
    const double at_zero = variance(t, 0.0);
    const double a = alpha(t, params);
    for (double m : m_grid) {
      const double v = variance(t, m);
      asymmetry = std::max(asymmetry, std::abs(v - variance(t, -m)));
      if (terminal) {
        terminal_dev = std::max(terminal_dev, std::abs(v - base));
        continue;
      }
      if (m != 0.0 && !(v > at_zero)) ++min_violations;
      // Central difference against d var/dm = -2 alpha m var.
      const double h = 1e-4 * std::max(1.0, std::abs(m));
      const double fd = (variance(t, m + h) - variance(t, m - h)) / (2.0 * h);
      const double analytic = -2.0 * a * m * v;
      derivative_err = std::max(derivative_err,
                                relative_error(fd, analytic, 1e-12 * std::max(v, 1e-300)));
    }
    if (!terminal) {
      for (std::size_t i = 1; i < magnitudes.size(); ++i) {
        if (!(variance(t, magnitudes[i]) > variance(t, magnitudes[i - 1]))) ++monotone_violations;
        if (!(variance(t, -magnitudes[i]) > variance(t, -magnitudes[i - 1]))) ++monotone_violations;
      }
    }
  }
  const std::size_t n = t_grid.size() * m_grid.size();
  std::vector<ResidualReport> reports{
      ResidualReport::make("conviction_symmetry", n, asymmetry, kExact),
      violation_report("conviction_minimum_at_zero", n, min_violations),
      violation_report("conviction_strict_monotonicity", n, monotone_violations),
      ResidualReport::make("conviction_derivative_identity", n, derivative_err, kPdeTolerance),
  };
  if (has_terminal_row) {
    reports.push_back(ResidualReport::make("conviction_terminal_collapse", m_grid.size(),
                                           terminal_dev / base, 1e-12));
  }
  return reports;
}

}  // namespace bayesmv
