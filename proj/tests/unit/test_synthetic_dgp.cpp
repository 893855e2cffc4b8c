#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "proxyzoo/error.hpp"
#include "proxyzoo/synthetic_dgp.hpp"

using namespace proxyzoo;

namespace {

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd x = a.array() - a.mean();
  const Eigen::VectorXd y = b.array() - b.mean();
  return x.dot(y) / (x.norm() * y.norm());
}

}  // namespace

TEST(PlanTau0, RatioOfLoadings) {
  EXPECT_NEAR(plan_tau0({"m", {0.6, 0.2, 0.0}, std::nullopt}), 3.0, 1e-15);
  EXPECT_NEAR(plan_tau0({"m", {0.6, -0.3, 0.15}, std::nullopt}), 2.0, 1e-15);
  EXPECT_TRUE(std::isinf(plan_tau0({"m", {0.7, 0.0, 0.0}, std::nullopt})));
}

TEST(DgpSpec, Validation) {
  auto spec = oracles::three_variable_dgp(100, 1);
  EXPECT_NO_THROW(spec.validate());
  spec.proxies = {{"m", {0.8, 0.7, 0.0}, std::nullopt}};
  EXPECT_THROW(spec.validate(), ValidationError);
  spec.proxies = {{"m", {0.5, 0.2}, std::nullopt}};
  EXPECT_THROW(spec.validate(), ValidationError);
  spec = oracles::three_variable_dgp(100, 1);
  spec.A[0] *= 3.0;
  EXPECT_THROW(spec.validate(), ValidationError);
}

TEST(Simulate, TruthObjectsAreConsistent) {
  auto spec = oracles::three_variable_dgp(200, 2);
  spec.proxies = {{"m1", {0.6, 0.2, 0.0}, std::nullopt}};
  const auto sim = simulate(spec);
  const auto& t = sim.truth;
  EXPECT_TRUE((t.B0.diagonal().array() > 0).all());
  EXPECT_LT((t.L0 * t.O0 - t.B0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((t.O0.transpose() * t.O0 - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE((t.L0.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().array() == 0).all());
  ASSERT_EQ(t.irf.size(), 25u);
  EXPECT_LT((t.irf[3] - oracles::matrix_power(spec.A[0], 3) * t.B0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(t.tau0[0], 3.0, 1e-15);
  EXPECT_EQ(sim.panel.periods(), 200);
  EXPECT_EQ(sim.panel.dates.front().text(), "1");
  EXPECT_EQ(sim.panel.dates.back().text(), "200");
  EXPECT_EQ(sim.proxies[0].size(), 200);
}

TEST(Simulate, ProxyCorrelationsMatchPlan) {
  auto spec = oracles::three_variable_dgp(5000, 3);
  spec.proxies = {{"m1", {0.6, 0.2, 0.0}, std::nullopt}, {"m2", {0.4, 0.0, -0.3}, 0.2}};
  const auto sim = simulate(spec);
  for (std::size_t l = 0; l < 2; ++l) {
    for (int j = 0; j < 3; ++j) {
      const double r = correlation(sim.proxies[l].values, sim.truth.shocks.col(j));
      EXPECT_NEAR(r, spec.proxies[l].correlations[static_cast<std::size_t>(j)], 0.03) << l << " " << j;
    }
  }
}

TEST(Simulate, ResidualsTrackStructuralShocks) {
  auto spec = oracles::three_variable_dgp(3000, 4);
  const auto sim = simulate(spec);
  const auto& y = sim.panel.values;
  const Eigen::MatrixXd u = y.bottomRows(y.rows() - 1) - y.topRows(y.rows() - 1) * spec.A[0].transpose();
  const Eigen::MatrixXd implied = sim.truth.shocks.bottomRows(u.rows()) * sim.truth.B0.transpose();
  EXPECT_LT((u - implied).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Simulate, DeterministicPerSeed) {
  auto spec = oracles::three_variable_dgp(100, 11);
  spec.proxies = {{"m1", {0.6, 0.2, 0.0}, std::nullopt}};
  const auto a = simulate(spec);
  const auto b = simulate(spec);
  EXPECT_TRUE((a.panel.values.array() == b.panel.values.array()).all());
  EXPECT_TRUE((a.proxies[0].values.array() == b.proxies[0].values.array()).all());
  spec.seed = 12;
  EXPECT_FALSE((simulate(spec).panel.values.array() == a.panel.values.array()).all());
}

TEST(MedianB, AdmissibleDrawsAndSummaries) {
  const auto sim = simulate(oracles::three_variable_dgp(600, 5));
  const auto rf = oracles::estimate_from_simulation(sim, 1, 4);
  SignRestrictionSpec spec;
  const auto sign = compile_sign(spec, rf);
  const auto draws = sample_admissible_rotations(rf, sign, 200, 20000, 7);
  ASSERT_EQ(draws.size(), 200u);
  for (const auto& o : draws) EXPECT_TRUE(check_feasibility(o, sign, GrrConstraintSet{}, 1e-12).feasible);

  const Eigen::MatrixXd med = median_b(draws, rf);
  Eigen::VectorXd column(200);
  for (int d = 0; d < 200; ++d) column(d) = (rf.chol * draws[static_cast<std::size_t>(d)])(1, 0);
  std::sort(column.data(), column.data() + 200);
  EXPECT_NEAR(med(1, 0), 0.5 * (column(99) + column(100)), 1e-12);

  const auto closest = closest_b_index(draws, rf);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : draws) best = std::min(best, (rf.chol * o - med).norm());
  EXPECT_NEAR((rf.chol * draws[closest] - med).norm(), best, 0.0);

  const auto proxy = median_b_proxy(draws, rf, MedianBVariant::closest);
  ASSERT_EQ(proxy.size(), rf.residuals.rows());
  const Eigen::MatrixXd b = rf.chol * draws[closest];
  const Eigen::VectorXd e0 = b.inverse() * rf.residuals.row(5).transpose();
  EXPECT_NEAR(proxy.values(5), e0(0), 1e-10);

  const std::vector<Eigen::MatrixXd> few(draws.begin(), draws.begin() + 50);
  EXPECT_THROW(median_b_proxy(few, rf), ValidationError);
}

TEST(MedianB, TightRestrictionsFailSampling) {
  const auto rf = oracles::synthetic_reduced_form(Eigen::Matrix3d::Identity() * 0.3, Eigen::Matrix3d::Identity(), {}, 1);
  SignRestrictionSpec spec;
  for (int v = 0; v < 3; ++v) spec.irf_entries.push_back({v, 0, 0, SignDirection::nonpositive});
  for (int v = 1; v < 3; ++v) spec.irf_entries.push_back({v, 0, 0, SignDirection::nonnegative});
  EXPECT_THROW(sample_admissible_rotations(rf, compile_sign(spec, rf), 10, 500, 1), ValidationError);
}
