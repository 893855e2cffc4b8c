#include <cmath>
#include <random>

#include <Eigen/QR>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "proxyzoo/error.hpp"
#include "proxyzoo/synthetic_dgp.hpp"
#include "proxyzoo/var_reduced_form.hpp"

using namespace proxyzoo;

namespace {

ProxySeries series_from(const Eigen::VectorXd& v, const std::vector<DateKey>& dates) {
  ProxySeries s;
  s.label = "m";
  s.dates = dates;
  s.values = v;
  s.observed.assign(static_cast<std::size_t>(v.size()), true);
  return s;
}

}  // namespace

TEST(Ols, NoiselessAr1RecoversCoefficientThenFailsPdCheck) {
  Eigen::MatrixXd y(60, 1);
  y(0, 0) = 1.0;
  for (int t = 1; t < 60; ++t) y(t, 0) = 0.5 * y(t - 1, 0);
  const auto fit = fit_var_ols(y, 1, false);
  EXPECT_NEAR(fit.coefficients[0](0, 0), 0.5, 1e-12);
  EXPECT_LT(fit.residuals.cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd sigma = fit.residuals.transpose() * fit.residuals / 59.0;
  EXPECT_THROW(cholesky_factor(sigma), NumericalError);
}

TEST(EstimateVar, RecoversSimulatedVar1) {
  auto spec = oracles::three_variable_dgp(5000, 17);
  const auto sim = simulate(spec);
  VarSpec vs;
  vs.horizon = 5;
  const auto rf = estimate_var(sim.panel, vs);
  EXPECT_LE((rf.coefficients[0] - spec.A[0]).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LT((rf.sigma - rf.chol * rf.chol.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_TRUE(rf.stable);
  EXPECT_TRUE(rf.irf[0].isIdentity(0.0));
  for (int i = 0; i < 3; ++i) EXPECT_GT(rf.chol(i, i), 0.0);
}

TEST(EstimateVar, ResidualsOrthogonalToRegressors) {
  const auto sim = simulate(oracles::three_variable_dgp(800, 5));
  VarSpec vs;
  vs.lag_order = 2;
  const auto rf = estimate_var(sim.panel, vs);
  const auto& y = sim.panel.values;
  const Eigen::Index T = y.rows();
  const Eigen::Index p = 2;
  double worst = 0.0;
  for (Eigen::Index l = 1; l <= p; ++l) {
    const Eigen::MatrixXd lagged = y.middleRows(p - l, T - p);
    worst = std::max(worst, (lagged.transpose() * rf.residuals).cwiseAbs().maxCoeff());
  }
  worst = std::max(worst, rf.residuals.colwise().sum().cwiseAbs().maxCoeff());
  const double scale = y.cwiseAbs().maxCoeff() * rf.residuals.cwiseAbs().maxCoeff() * static_cast<double>(T);
  EXPECT_LT(worst, 1e-8 * scale);
}

TEST(EstimateVar, ShortSampleAndCollinearity) {
  Panel p;
  p.names = {"a", "b", "c"};
  p.values = Eigen::MatrixXd::Random(5, 3);
  for (int t = 0; t < 5; ++t) p.dates.push_back(DateKey::parse(std::to_string(t + 1)));
  VarSpec vs;
  EXPECT_THROW(estimate_var(p, vs), ValidationError);

  const auto sim = simulate(oracles::three_variable_dgp(200, 2));
  Panel q = sim.panel;
  q.values.col(2) = 2.0 * q.values.col(0) - q.values.col(1);
  EXPECT_THROW(estimate_var(q, vs), NumericalError);

  VarSpec bad;
  bad.lag_order = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Cholesky, IdentityAndHandExample) {
  EXPECT_TRUE(cholesky_factor(Eigen::MatrixXd::Identity(4, 4)).isIdentity(1e-15));
  Eigen::MatrixXd s(2, 2);
  s << 4, 2, 2, 2;
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 0, 1, 1;
  const auto l = cholesky_factor(s);
  EXPECT_LT((l - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((l * l.transpose() - s).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Cholesky, SingularInputReportsEigenvalue) {
  Eigen::MatrixXd s(2, 2);
  s << 1, 1, 1, 1;
  try {
    cholesky_factor(s);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("smallest eigenvalue"), std::string::npos);
  }
}

TEST(ReducedIrfs, IdentityAtZeroAndMatrixPower) {
  Eigen::MatrixXd a(3, 3);
  a << 0.5, 0.2, 0.0, -0.1, 0.3, 0.4, 0.0, 0.1, 0.6;
  const std::vector<Eigen::MatrixXd> coeffs{a};
  const auto c = reduced_irfs(coeffs, 5);
  ASSERT_EQ(c.size(), 6u);
  EXPECT_TRUE(c[0].isIdentity(0.0));
  for (int h = 0; h <= 5; ++h) EXPECT_LT((c[h] - oracles::matrix_power(a, h)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(reduced_irfs(coeffs, 0)[0].isIdentity(0.0));
}

TEST(ReducedIrfs, ZeroSecondLagMatchesVar1) {
  Eigen::MatrixXd a(2, 2);
  a << 0.4, 0.1, 0.2, 0.3;
  const std::vector<Eigen::MatrixXd> one{a};
  const std::vector<Eigen::MatrixXd> two{a, Eigen::MatrixXd::Zero(2, 2)};
  const auto c1 = reduced_irfs(one, 8);
  const auto c2 = reduced_irfs(two, 8);
  for (int h = 0; h <= 8; ++h) EXPECT_LT((c1[h] - c2[h]).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ReducedIrfs, StableVarDecaysGeometrically) {
  Eigen::MatrixXd a(2, 2);
  a << 0.6, 0.2, -0.1, 0.5;
  const std::vector<Eigen::MatrixXd> coeffs{a};
  const auto c = reduced_irfs(coeffs, 50);
  EXPECT_LT(c[50].norm(), std::pow(companion_spectral_radius(coeffs) + 0.05, 50));
  EXPECT_LT(c[50].norm(), 1e-6);
}

TEST(ProxyMoments, OrthogonalProxyGivesZero) {
  const auto sim = simulate(oracles::three_variable_dgp(300, 8));
  const auto rf = estimate_var(sim.panel, VarSpec{});
  // project a random series off the residual columns and the constant
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::VectorXd m(rf.residuals.rows());
  for (Eigen::Index t = 0; t < m.size(); ++t) m(t) = normal(rng);
  Eigen::MatrixXd x(rf.residuals.rows(), 4);
  x << Eigen::VectorXd::Ones(m.size()), rf.residuals;
  m -= x * x.colPivHouseholderQr().solve(m);
  const std::vector<ProxySeries> proxies{series_from(m, rf.residual_dates)};
  const auto M = proxy_moments(rf.residuals, rf.chol, proxies, MissingPolicy::zero);
  EXPECT_LT(M[0].cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProxyMoments, FirstOrthogonalizedResidualByDirectSummation) {
  const auto sim = simulate(oracles::three_variable_dgp(400, 12));
  const auto rf = estimate_var(sim.panel, VarSpec{});
  const Eigen::MatrixXd w = rf.chol.triangularView<Eigen::Lower>().solve(rf.residuals.transpose()).transpose();
  const Eigen::VectorXd m = w.col(0);
  const std::vector<ProxySeries> proxies{series_from(m, rf.residual_dates)};
  const auto M = proxy_moments(rf.residuals, rf.chol, proxies, MissingPolicy::zero)[0];
  const double T = static_cast<double>(m.size());
  const double mean = m.mean();
  double s2 = 0.0;
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(3);
  for (Eigen::Index t = 0; t < m.size(); ++t) {
    s2 += (m(t) - mean) * (m(t) - mean) / T;
    for (int i = 0; i < 3; ++i) direct(i) += w(t, i) * (m(t) - mean) / T;
  }
  EXPECT_NEAR(M(0), s2, 1e-12);
  EXPECT_NEAR(M(1), 0.0, 1e-12);
  EXPECT_NEAR(M(2), 0.0, 1e-12);
  EXPECT_LT((M - direct).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProxyMoments, ShiftInvarianceAndLinearity) {
  const auto sim = simulate(oracles::three_variable_dgp(300, 21));
  const auto rf = estimate_var(sim.panel, VarSpec{});
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::VectorXd a(rf.residuals.rows());
  Eigen::VectorXd b(rf.residuals.rows());
  for (Eigen::Index t = 0; t < a.size(); ++t) {
    a(t) = normal(rng);
    b(t) = normal(rng) + 0.3 * rf.residuals(t, 1);
  }
  auto moment = [&](const Eigen::VectorXd& v) {
    const std::vector<ProxySeries> p{series_from(v, rf.residual_dates)};
    return proxy_moments(rf.residuals, rf.chol, p, MissingPolicy::zero)[0];
  };
  EXPECT_LT((moment(a) - moment((a.array() + 7.5).matrix())).cwiseAbs().maxCoeff(), 1e-13);
  const Eigen::VectorXd combo = 2.0 * a - 0.5 * b;
  EXPECT_LT((moment(combo) - (2.0 * moment(a) - 0.5 * moment(b))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ProxyMoments, DegenerateProxyAndDropReport) {
  const auto sim = simulate(oracles::three_variable_dgp(200, 3));
  const auto rf = estimate_var(sim.panel, VarSpec{});
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(rf.residuals.rows());
  std::vector<ProxySeries> z{series_from(zero, rf.residual_dates)};
  EXPECT_THROW(proxy_moments(rf.residuals, rf.chol, z, MissingPolicy::zero), ValidationError);

  Eigen::VectorXd v = rf.residuals.col(0);
  ProxySeries s = series_from(v, rf.residual_dates);
  s.policy = MissingPolicy::drop_report;
  for (int t = 0; t < 50; ++t) {
    s.observed[static_cast<std::size_t>(t)] = false;
    s.values(t) = std::nan("");
  }
  std::vector<Eigen::Index> obs;
  const std::vector<ProxySeries> ps{s};
  const auto M = proxy_moments(rf.residuals, rf.chol, ps, MissingPolicy::drop_report, &obs);
  EXPECT_EQ(obs[0], rf.residuals.rows() - 50);
  const Eigen::MatrixXd w = rf.chol.triangularView<Eigen::Lower>().solve(rf.residuals.transpose()).transpose();
  const double mean = v.tail(v.size() - 50).mean();
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(3);
  for (Eigen::Index t = 50; t < v.size(); ++t) direct += w.row(t).transpose() * (v(t) - mean);
  direct /= static_cast<double>(v.size() - 50);
  EXPECT_LT((M[0] - direct).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AssembleReducedForm, AttachesLabelsAndMoments) {
  auto spec = oracles::three_variable_dgp(300, 4);
  spec.proxies = {{"a", {0.5, 0.0, 0.0}, {}}, {"b", {0.3, 0.1, 0.0}, {}}};
  const auto sim = simulate(spec);
  const auto rf = oracles::estimate_from_simulation(sim, 1, 6);
  EXPECT_EQ(rf.proxies(), 2);
  EXPECT_EQ(rf.proxy_labels, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rf.horizon(), 6);
  for (const auto& m : rf.proxy_moments) EXPECT_TRUE(m.allFinite());
  EXPECT_GT(rf.proxy_moments[0](0), 0.0);
}
