#pragma once

#include "bayesmv/coefficients.hpp"
#include "bayesmv/params.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bayesmv {

/// Outcome of one identity check. `passed` is max_abs_residual < tolerance.
struct ResidualReport {
  std::string name;
  std::size_t grid_size = 0;
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;

  static ResidualReport make(std::string name, std::size_t grid_size, double residual,
                             double tolerance);
};

/// Hard failure of a check's precondition (for example V_xx <= 0).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kOdeTolerance = 1e-6;
inline constexpr double kPdeTolerance = 1e-4;
/// Tolerance for checks that must hold exactly: passes only on a zero residual.
inline constexpr double kExact = 1e-300;

struct RiccatiOptions {
  std::size_t n_grid = 1000;
  double fd_step = 1e-5;
  QuadratureOptions quad{};
  /// Test hook: constant added to alpha before checking its ODE.
  double alpha_fault = 0.0;
};

/// Residuals of the four coefficient ODEs on an interior grid, derivatives by
/// five-point central differences:
///   alpha' = 1 + 4 P alpha + 2 P^2 alpha^2,  gamma' = -P^2 alpha,
///   eta' = -(tau/2) alpha,  zeta' = (tau/2)[log(pi tau/sigma^2) - gamma] - P^2 eta.
/// The eta/zeta reports are omitted when tau == 0.
std::vector<ResidualReport> riccati_residuals(const ModelParams& params,
                                              const RiccatiOptions& options = {});

/// Central-difference step in the wealth direction. Central differences are
/// exact for any step on a quadratic, so a wide step only removes rounding
/// error when the curvature A is tiny; x-dependence that is not quadratic
/// still shows up as truncation error.
inline constexpr double kWealthStep = 0.25;

/// Terms of the on-characteristic reduced HJB at one node, all from central
/// differences of the closed-form value (step h in t and m, kWealthStep in x).
struct HjbTerms {
  double time_derivative = 0.0;  ///< V_t (total derivative along dP = -P^2 dt)
  double diffusion = 0.0;        ///< (P^2/2) V_mm
  double control = 0.0;          ///< -(m V_x + P V_xm)^2 / (2 V_xx)
  double entropy = 0.0;          ///< -(tau/2) log(2 pi tau / (sigma^2 V_xx))
  double v_xx = 0.0;
  double residual = 0.0;         ///< sum of the four terms
};

HjbTerms hjb_terms(const ModelParams& params, double t, double x, double m, double h,
                   const QuadratureOptions& quad = {});

struct HjbGrid {
  std::vector<double> t;
  std::vector<double> m;
  std::vector<double> x;

  /// t in [0.1T, 0.9T], m in [-2, 2], x in [-1, 3], 17 points each.
  static HjbGrid standard(const ModelParams& params, std::size_t points = 17);
};

/// Max |residual| of the reduced HJB over the grid. Requires tau > 0.
/// Throws VerificationError if V_xx <= 0 at any node.
ResidualReport hjb_residual(const ModelParams& params, const HjbGrid& grid, double h,
                            const QuadratureOptions& quad = {});

/// Max residual at each step size plus the least-squares log-log slope.
struct HjbConvergence {
  std::vector<double> steps;
  std::vector<double> max_residuals;
  double slope = 0.0;
};

HjbConvergence hjb_convergence(const ModelParams& params, const HjbGrid& grid,
                               std::span<const double> steps,
                               const QuadratureOptions& quad = {});

/// Report passing iff the observed order lies in [1.7, 2.3].
ResidualReport hjb_order_report(const HjbConvergence& convergence);

struct PolicyState {
  double t = 0.0;
  double x = 0.0;
  double m = 0.0;
};

/// Deterministic sample of states with t < T spanning x in [-1, 3], m in [-2, 2].
std::vector<PolicyState> sample_policy_states(const ModelParams& params, std::size_t count,
                                              std::uint64_t seed);

/// Per-state result of minimizing Phi over Gaussian (mean, variance).
struct FocResult {
  PolicyState state;
  double mean = 0.0;
  double variance = 0.0;
  double phi = 0.0;             ///< Phi at the numerical minimizer
  double phi_closed_form = 0.0; ///< Phi at the closed-form policy
  double phi_mixture_excess = 0.0;  ///< Phi(mixture) - Phi(Gaussian) at equal moments
  std::size_t iterations = 0;
  bool converged = false;
};

/// Minimizes Phi(pi) = sigma u G + (sigma^2/2)(u^2 + s^2) V_xx + tau H(pi) over
/// Gaussian pi with Newton's method, where G = m V_x + P V_xm and V_xx come
/// from finite differences of the value function.
FocResult minimize_gaussian_phi(const ModelParams& params, const PolicyState& state,
                                std::size_t n_quadrature,
                                const QuadratureOptions& quad = {});

/// Compares minimize_gaussian_phi against optimal_policy at each state.
/// Reports the mean/variance relative mismatch, the closed-form Phi gap and
/// whether every mixture raised Phi. Requires tau > 0.
std::vector<ResidualReport> gaussian_foc_check(const ModelParams& params,
                                               std::span<const PolicyState> states,
                                               std::size_t n_quadrature = 4001,
                                               const QuadratureOptions& quad = {});

/// Policy at prior variance epsilon against the known-drift formulas
/// u = -(m/sigma)(x-w), s^2 = tau/(2 sigma^2) e^{m^2 (T-t)}. The variance
/// deviation is absolute for reference values up to 1 and relative above.
std::vector<ResidualReport> limit_check_known_drift(const ModelParams& params_base,
                                                    double epsilon = 1e-10);

/// Mean position identical across tau, variance exactly proportional to tau,
/// and zero variance at tau = 0.
std::vector<ResidualReport> limit_check_deterministic(const ModelParams& params_base,
                                                      std::span<const double> tau_sequence);

/// Symmetry, minimum at m = 0, strict growth in |m| for t < T, the derivative
/// identity d var/dm = -2 alpha m var, and collapse of the t = T row.
std::vector<ResidualReport> conviction_check(const ModelParams& params,
                                             std::span<const double> t_grid,
                                             std::span<const double> m_grid);

/// Inclusive uniform grid of `points` values over [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t points);

}  // namespace bayesmv
