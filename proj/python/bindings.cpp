#include "bayesmv/coefficients.hpp"
#include "bayesmv/filter.hpp"
#include "bayesmv/montecarlo.hpp"
#include "bayesmv/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace bayesmv;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

FilterMode filter_mode(std::optional<double> rho) {
  if (rho) return FixedRho{*rho};
  return PriorSampled{};
}

SimulationSettings make_settings(double x0, const std::string& mode, std::size_t n_paths,
                                 std::size_t n_steps, std::uint64_t seed, double mean_scale,
                                 std::vector<double> checkpoints) {
  SimulationSettings s;
  s.x0 = x0;
  s.mode = parse_driving_mode(mode);
  s.n_paths = n_paths;
  s.n_steps = n_steps;
  s.seed = seed;
  s.mean_scale = mean_scale;
  s.checkpoints = std::move(checkpoints);
  return s;
}

py::dict report_dict(const ResidualReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["grid_size"] = r.grid_size;
  d["max_abs_residual"] = r.max_abs_residual;
  d["tolerance"] = r.tolerance;
  d["passed"] = r.passed;
  return d;
}

py::list report_list(const std::vector<ResidualReport>& reports) {
  py::list out;
  for (const auto& r : reports) out.append(report_dict(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_bayesmv, mod) {
  mod.doc() = "Exploratory mean-variance control with a Gaussian prior on the Sharpe ratio";

  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<VerificationError>(mod, "VerificationError", PyExc_RuntimeError);

  py::class_<ModelParams>(mod, "ModelParams")
      .def(py::init([](double sigma, double T, double tau, double w, double m0, double P0) {
             ModelParams p{sigma, T, tau, w, m0, P0};
             p.validate();
             return p;
           }),
           py::arg("sigma") = 0.2, py::arg("T") = 1.0, py::arg("tau") = 1.0,
           py::arg("w") = 1.0, py::arg("m0") = 0.0, py::arg("P0") = 1.0)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("T", &ModelParams::horizon_T)
      .def_readwrite("tau", &ModelParams::tau)
      .def_readwrite("w", &ModelParams::target_w)
      .def_readwrite("m0", &ModelParams::prior_mean_m0)
      .def_readwrite("P0", &ModelParams::prior_var_P0)
      .def("validate", &ModelParams::validate)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(sigma=" + std::to_string(p.sigma) +
               ", T=" + std::to_string(p.horizon_T) + ", tau=" + std::to_string(p.tau) +
               ", w=" + std::to_string(p.target_w) + ", m0=" + std::to_string(p.prior_mean_m0) +
               ", P0=" + std::to_string(p.prior_var_P0) + ")";
      });

  mod.def("posterior_variance", &posterior_variance, py::arg("t"), py::arg("P0"));
  mod.def("alpha", &bayesmv::alpha, py::arg("t"), py::arg("params"));
  mod.def("gamma", &bayesmv::gamma, py::arg("t"), py::arg("params"));
  mod.def(
      "eta",
      [](double t, const ModelParams& p, std::size_t n) { return eta(t, p, {n}); },
      py::arg("t"), py::arg("params"), py::arg("quadrature_n") = 1024);
  mod.def(
      "zeta",
      [](double t, const ModelParams& p, std::size_t n) { return zeta(t, p, {n}); },
      py::arg("t"), py::arg("params"), py::arg("quadrature_n") = 1024);
  mod.def("curvature_A", &curvature_A, py::arg("t"), py::arg("m"), py::arg("params"));
  mod.def(
      "value",
      [](double t, double x, double m, const ModelParams& p, bool deterministic, std::size_t n) {
        return value(t, x, m, p, deterministic, {n});
      },
      py::arg("t"), py::arg("x"), py::arg("m"), py::arg("params"),
      py::arg("deterministic_limit") = false, py::arg("quadrature_n") = 1024);
  mod.def(
      "optimal_policy",
      [](double t, double x, double m, const ModelParams& p) {
        const GaussianPolicy g = optimal_policy(t, x, m, p);
        return py::make_tuple(g.mean_position, g.variance);
      },
      py::arg("t"), py::arg("x"), py::arg("m"), py::arg("params"),
      "Returns (mean_position, variance).");

  mod.def(
      "simulate_filter_paths",
      [](const ModelParams& p, std::optional<double> rho, std::size_t n_paths,
         std::size_t n_steps, std::uint64_t seed) {
        const FilterEnsemble e = simulate_filter_paths(p, filter_mode(rho), n_paths, n_steps, seed);
        py::array_t<double> m({static_cast<py::ssize_t>(e.paths.size()),
                               static_cast<py::ssize_t>(e.times.size())});
        std::vector<double> rho_true;
        auto view = m.mutable_unchecked<2>();
        for (std::size_t i = 0; i < e.paths.size(); ++i) {
          for (std::size_t k = 0; k < e.times.size(); ++k) {
            view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(k)) = e.paths[i].m_values[k];
          }
          rho_true.push_back(e.paths[i].rho_true);
        }
        return py::make_tuple(to_array(e.times), m, to_array(rho_true));
      },
      py::arg("params"), py::arg("rho") = 1.0, py::arg("n_paths") = 5,
      py::arg("n_steps") = 200, py::arg("seed") = 0,
      "Returns (times, m[path, time], rho_true). rho=None samples rho from the prior.");
  mod.def(
      "simulate_filter_terminal",
      [](const ModelParams& p, std::optional<double> rho, std::size_t n_paths,
         std::size_t n_steps, std::uint64_t seed) {
        return to_array(simulate_filter_terminal(p, filter_mode(rho), n_paths, n_steps, seed));
      },
      py::arg("params"), py::arg("rho") = py::none(), py::arg("n_paths") = 10000,
      py::arg("n_steps") = 200, py::arg("seed") = 0);

  mod.def(
      "simulate_controlled",
      [](const ModelParams& p, double x0, const std::string& mode, std::size_t n_paths,
         std::size_t n_steps, std::uint64_t seed, double mean_scale) {
        const PathEnsemble e =
            simulate_controlled(p, make_settings(x0, mode, n_paths, n_steps, seed, mean_scale, {}));
        py::dict d;
        d["terminal_wealth"] = to_array(e.terminal_wealth);
        d["terminal_belief"] = to_array(e.terminal_belief);
        d["terminal_cost"] = to_array(e.terminal_cost);
        d["entropy_cost"] = to_array(e.entropy_cost);
        d["quarantined"] = e.quarantined;
        const Estimate est = estimate_objective(e);
        d["objective"] = est.estimate;
        d["stderr"] = est.std_error;
        return d;
      },
      py::arg("params"), py::arg("x0") = 0.0, py::arg("mode") = "innovation",
      py::arg("n_paths") = 100000, py::arg("n_steps") = 200, py::arg("seed") = 0,
      py::arg("mean_scale") = 1.0);

  mod.def(
      "martingale_diagnostic",
      [](const ModelParams& p, std::vector<double> checkpoints, double x0,
         const std::string& mode, std::size_t n_paths, std::size_t n_steps, std::uint64_t seed,
         double mean_scale) {
        const auto points = martingale_diagnostic(
            p, make_settings(x0, mode, n_paths, n_steps, seed, mean_scale, std::move(checkpoints)));
        py::list out;
        for (const auto& pt : points) out.append(py::make_tuple(pt.t, pt.mean, pt.std_error));
        return out;
      },
      py::arg("params"), py::arg("checkpoints"), py::arg("x0") = 0.0,
      py::arg("mode") = "innovation", py::arg("n_paths") = 100000, py::arg("n_steps") = 200,
      py::arg("seed") = 0, py::arg("mean_scale") = 1.0,
      "Returns a list of (t, mean, stderr) tuples.");

  mod.def(
      "frontier_sweep",
      [](const ModelParams& p, std::vector<double> w_grid, double x0, const std::string& mode,
         std::size_t n_paths, std::size_t n_steps, std::uint64_t seed) {
        const auto rows =
            frontier_sweep(p, make_settings(x0, mode, n_paths, n_steps, seed, 1.0, {}), w_grid);
        py::list out;
        for (const auto& r : rows) {
          out.append(py::make_tuple(r.w, r.mean_terminal, r.std_terminal, r.stderr_mean));
        }
        return out;
      },
      py::arg("params"), py::arg("w_grid"), py::arg("x0") = 0.0, py::arg("mode") = "innovation",
      py::arg("n_paths") = 10000, py::arg("n_steps") = 200, py::arg("seed") = 0,
      "Returns a list of (w, mean, std, stderr_mean) tuples.");

  mod.def(
      "riccati_residuals",
      [](const ModelParams& p, std::size_t n_grid) {
        RiccatiOptions o;
        o.n_grid = n_grid;
        return report_list(riccati_residuals(p, o));
      },
      py::arg("params"), py::arg("n_grid") = 1000);
  mod.def(
      "hjb_residual",
      [](const ModelParams& p, double h) {
        return report_dict(hjb_residual(p, HjbGrid::standard(p), h));
      },
      py::arg("params"), py::arg("h") = 1e-3);
  mod.def(
      "gaussian_foc_check",
      [](const ModelParams& p, std::size_t n_states, std::uint64_t seed) {
        const auto states = sample_policy_states(p, n_states, seed);
        return report_list(gaussian_foc_check(p, states));
      },
      py::arg("params"), py::arg("n_states") = 20, py::arg("seed") = 0);
  mod.def(
      "conviction_check",
      [](const ModelParams& p, std::size_t t_points, std::size_t m_points, double m_max) {
        const auto ts = linspace(0.0, p.horizon_T, t_points);
        const auto ms = linspace(-m_max, m_max, m_points);
        return report_list(conviction_check(p, ts, ms));
      },
      py::arg("params"), py::arg("t_points") = 101, py::arg("m_points") = 121,
      py::arg("m_max") = 2.0);
}
