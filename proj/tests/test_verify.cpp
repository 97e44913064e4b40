#include "bayesmv/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace {

using bayesmv::ModelParams;
using bayesmv::ResidualReport;

const ResidualReport& find(const std::vector<ResidualReport>& reports, const std::string& name) {
  const auto it = std::find_if(reports.begin(), reports.end(),
                               [&](const ResidualReport& r) { return r.name == name; });
  if (it == reports.end()) throw std::runtime_error("missing report " + name);
  return *it;
}

void expect_all_pass(const std::vector<ResidualReport>& reports) {
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.max_abs_residual << " vs " << r.tolerance;
  }
}

TEST(ResidualReport, StrictComparison) {
  EXPECT_TRUE(ResidualReport::make("a", 1, 0.0, bayesmv::kExact).passed);
  EXPECT_FALSE(ResidualReport::make("a", 1, 1e-6, 1e-6).passed);
  EXPECT_FALSE(ResidualReport::make("a", 1, std::nan(""), 1.0).passed);
}

TEST(Riccati, DefaultParametersPass) {
  const auto reports = bayesmv::riccati_residuals(ModelParams{});
  ASSERT_EQ(reports.size(), 4u);
  expect_all_pass(reports);
  for (const auto& r : reports) EXPECT_LT(r.max_abs_residual, 1e-9) << r.name;
}

TEST(Riccati, KnownDriftLimitPasses) {
  expect_all_pass(bayesmv::riccati_residuals(ModelParams{}.with_prior(0.0, 0.0)));
}

TEST(Riccati, DeterministicLimitOmitsPremiumOdes) {
  const auto reports = bayesmv::riccati_residuals(ModelParams{}.with_tau(0.0));
  ASSERT_EQ(reports.size(), 2u);
  expect_all_pass(reports);
}

TEST(Riccati, InjectedFaultIsDetected) {
  bayesmv::RiccatiOptions options;
  options.alpha_fault = 1e-3;
  const auto reports = bayesmv::riccati_residuals(ModelParams{}, options);
  EXPECT_FALSE(find(reports, "alpha_riccati").passed);
  EXPECT_GT(find(reports, "alpha_riccati").max_abs_residual, 1e-4);
}

TEST(Hjb, ResidualSmallAndSecondOrder) {
  const ModelParams p;
  const auto grid = bayesmv::HjbGrid::standard(p);
  EXPECT_EQ(grid.t.size() * grid.m.size() * grid.x.size(), 17u * 17u * 17u);
  const double steps[] = {4e-3, 2e-3, 1e-3};
  const auto conv = bayesmv::hjb_convergence(p, grid, steps);
  ASSERT_EQ(conv.max_residuals.size(), 3u);
  EXPECT_LT(conv.max_residuals.back(), bayesmv::kPdeTolerance);
  EXPECT_GE(conv.slope, 1.7);
  EXPECT_LE(conv.slope, 2.3);
  // Halving h roughly quarters the residual.
  EXPECT_NEAR(conv.max_residuals[1] / conv.max_residuals[2], 4.0, 0.5);
  EXPECT_TRUE(bayesmv::hjb_order_report(conv).passed);
}

TEST(Hjb, TermsNearTerminalTime) {
  // Near T, V_xx -> 2 and the entropy term tends to -(tau/2) log(2 pi tau / (2 sigma^2)).
  const ModelParams p;
  const auto terms = bayesmv::hjb_terms(p, 1.0 - 1e-3, 0.3, 0.5, 1e-4);
  EXPECT_NEAR(terms.v_xx, 2.0, 1e-2);
  const double limit = -0.5 * std::log(2.0 * std::numbers::pi / (2.0 * 0.04));
  EXPECT_NEAR(terms.entropy, limit, 1e-2);
  EXPECT_LT(std::abs(terms.residual), 1e-5);
}

TEST(Hjb, RequiresEntropyWeight) {
  const ModelParams p = ModelParams{}.with_tau(0.0);
  EXPECT_THROW(bayesmv::hjb_residual(p, bayesmv::HjbGrid::standard(p), 1e-3),
               bayesmv::DomainError);
}

TEST(GaussianFoc, RecoversClosedFormPolicy) {
  const ModelParams p;
  const auto states = bayesmv::sample_policy_states(p, 20, 3);
  ASSERT_EQ(states.size(), 20u);
  for (const auto& s : states) EXPECT_LT(s.t, p.horizon_T);
  expect_all_pass(bayesmv::gaussian_foc_check(p, states));
}

TEST(GaussianFoc, DoublingTauDoublesVariance) {
  const ModelParams p;
  const bayesmv::PolicyState state{0.2, 0.4, 0.8};
  const auto base = bayesmv::minimize_gaussian_phi(p, state, 4001);
  const auto doubled = bayesmv::minimize_gaussian_phi(p.with_tau(2.0), state, 4001);
  ASSERT_TRUE(base.converged);
  ASSERT_TRUE(doubled.converged);
  EXPECT_NEAR(doubled.variance / base.variance, 2.0, 1e-6);
  EXPECT_NEAR(doubled.mean, base.mean, 1e-6 * std::abs(base.mean));
  EXPECT_GT(base.phi_mixture_excess, 0.0);
}

TEST(GaussianFoc, SinglePointMatchesOptimalPolicy) {
  const ModelParams p;
  const auto r = bayesmv::minimize_gaussian_phi(p, {0.0, 0.0, 1.0}, 4001);
  const auto g = bayesmv::optimal_policy(0.0, 0.0, 1.0, p);
  EXPECT_NEAR(r.mean, g.mean_position, 1e-4 * std::abs(g.mean_position));
  EXPECT_NEAR(r.variance, g.variance, 1e-4 * g.variance);
  EXPECT_LE(r.phi, r.phi_closed_form + 1e-9);
}

TEST(Limits, KnownDrift) {
  const ModelParams p;
  expect_all_pass(bayesmv::limit_check_known_drift(p, 1e-10));
  const auto known = p.with_prior(0.0, 1e-10);
  EXPECT_NEAR(bayesmv::optimal_policy(0.0, 0.0, 1.0, known).variance, 33.97852285573806, 1e-6);
}

TEST(Limits, Deterministic) {
  const ModelParams p;
  const double taus[] = {1.0, 0.1, 0.01, 0.0};
  const auto reports = bayesmv::limit_check_deterministic(p, taus);
  expect_all_pass(reports);
  EXPECT_EQ(find(reports, "deterministic_mean_tau_invariant").max_abs_residual, 0.0);
  EXPECT_EQ(find(reports, "deterministic_zero_variance").max_abs_residual, 0.0);
}

TEST(Conviction, DefaultGrid) {
  const ModelParams p;
  const auto ts = bayesmv::linspace(0.0, 1.0, 101);
  const auto ms = bayesmv::linspace(-2.0, 2.0, 121);
  expect_all_pass(bayesmv::conviction_check(p, ts, ms));
  EXPECT_NEAR(bayesmv::optimal_policy(1.0, 0.0, 1.7, p).variance, 12.5, 12.5e-12);
}

TEST(Linspace, SymmetricWithExactEndpoints) {
  const auto g = bayesmv::linspace(-2.0, 2.0, 121);
  ASSERT_EQ(g.size(), 121u);
  EXPECT_EQ(g.front(), -2.0);
  EXPECT_EQ(g.back(), 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], -g[g.size() - 1 - i]);
  EXPECT_EQ(g[60], 0.0);
  const auto t = bayesmv::linspace(0.0, 0.37, 101);
  EXPECT_EQ(t.back(), 0.37);
}

}  // namespace
