#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "proxyzoo/error.hpp"
#include "proxyzoo/quality_bound.hpp"
#include "proxyzoo/set_identification.hpp"

using namespace proxyzoo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolverConfig test_config() {
  SolverConfig cfg;
  cfg.restarts = 12;
  cfg.jobs = 1;
  return cfg;
}

ReducedForm two_variable_rf(const Eigen::Vector2d& m) {
  Eigen::Matrix2d a;
  a << 0.5, 0.2, -0.1, 0.3;
  Eigen::Matrix2d s;
  s << 1.0, 0.4, 0.4, 0.7;
  return oracles::synthetic_reduced_form(a, s, {m}, 4);
}

/// Population reduced form of a DGP: Sigma = B0 B0', M_l proportional to O0 rho_l.
ReducedForm population_rf(const DgpSpec& spec, int horizon) {
  const auto sim = simulate([&] {
    DgpSpec s = spec;
    s.T = 20;
    return s;
  }());
  std::vector<Eigen::VectorXd> moments;
  for (const auto& plan : spec.proxies) {
    Eigen::VectorXd rho = Eigen::Map<const Eigen::VectorXd>(plan.correlations.data(),
                                                           static_cast<Eigen::Index>(plan.correlations.size()));
    moments.push_back(sim.truth.O0 * rho);
  }
  return oracles::synthetic_reduced_form(spec.A[0], sim.truth.B0 * sim.truth.B0.transpose(), moments, horizon);
}

}  // namespace

TEST(SolverConfig, RejectsBadValues) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.restarts = -1;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SolverConfig{};
  cfg.feasibility_tol = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(StoredRotation, RoundTripsBothSheets) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd o = random_rotation(4, rng).matrix;
    if (trial % 2) o = o * last_column_flip(4);
    const auto stored = StoredRotation::from_matrix(o);
    ASSERT_TRUE(stored.has_value());
    EXPECT_EQ(stored->reflected, trial % 2 == 1);
    EXPECT_LT((stored->matrix() - o).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DefaultStarts, CoversBothSheetsDeterministically) {
  const auto a = default_starts(3, 6, 99);
  const auto b = default_starts(3, 6, 99);
  ASSERT_EQ(a.size(), 8u);
  int reflected = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    reflected += a[i].reflected;
    EXPECT_TRUE((a[i].params.theta.array() == b[i].params.theta.array()).all());
  }
  EXPECT_GE(reflected, 3);
}

TEST(SolveBound, MatchesCircleOracleForTwoVariables) {
  const SolverConfig cfg = test_config();
  const std::vector<Eigen::Vector2d> moments = {{1.0, 0.4}, {0.3, -1.0}, {-0.5, 0.8}};
  for (const auto& m : moments) {
    const auto rf = two_variable_rf(m);
    const auto sign = compile_sign(SignRestrictionSpec{}, rf);
    for (double tau : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const auto grr = compile_grr(rf.proxy_moments, tau, 2);
      for (int var = 0; var < 2; ++var) {
        for (int h : {0, 2}) {
          const auto lo = make_bound_problem(rf, sign, grr, var, h, Sense::min);
          const auto hi = make_bound_problem(rf, sign, grr, var, h, Sense::max);
          const auto oracle = oracles::circle_grid_range(Eigen::Vector2d(lo.objective), lo.constraints);
          const auto starts = default_starts(2, cfg.restarts, derive_seed(cfg.seed, var, h));
          const auto slo = solve_bound(lo, starts, cfg);
          const auto shi = solve_bound(hi, starts, cfg);
          ASSERT_EQ(slo.empty, oracle.empty) << "tau " << tau;
          if (oracle.empty) continue;
          EXPECT_NEAR(slo.value, oracle.lower, 1e-6) << "tau " << tau << " var " << var << " h " << h;
          EXPECT_NEAR(shi.value, oracle.upper, 1e-6) << "tau " << tau << " var " << var << " h " << h;
        }
      }
    }
  }
}

TEST(SolveBound, ReportedValueMatchesStoredArgmin) {
  const auto rf = two_variable_rf({1.0, 0.4});
  const auto sign = compile_sign(SignRestrictionSpec{}, rf);
  const auto grid = sweep(rf, sign, {0.0, 1.0}, {0, 1}, {0, 1, 2, 3}, test_config());
  for (const auto& cell : grid.cells) {
    ASSERT_FALSE(cell.empty);
    ASSERT_TRUE(cell.argmin_lower && cell.argmin_upper);
    const Eigen::VectorXd f = (rf.irf[cell.horizon] * rf.chol).row(cell.variable).transpose();
    EXPECT_NEAR(f.dot(cell.argmin_lower->matrix().col(0)), cell.lower, 1e-9);
    EXPECT_NEAR(f.dot(cell.argmin_upper->matrix().col(0)), cell.upper, 1e-9);
  }
}

TEST(Sweep, ContradictoryRestrictionsAreEmpty) {
  Eigen::Matrix3d a = Eigen::Matrix3d::Identity() * 0.4;
  const auto rf = oracles::synthetic_reduced_form(a, Eigen::Matrix3d::Identity(), {Eigen::Vector3d(1, 0, 0)}, 2);
  SignRestrictionSpec spec;
  spec.irf_entries.push_back({0, 0, 0, SignDirection::nonpositive});
  spec.irf_entries.push_back({1, 0, 0, SignDirection::nonpositive});
  spec.irf_entries.push_back({2, 0, 0, SignDirection::nonpositive});
  spec.irf_entries.push_back({1, 0, 0, SignDirection::nonnegative});
  spec.irf_entries.push_back({2, 0, 0, SignDirection::nonnegative});
  const auto sign = compile_sign(spec, rf);
  const auto grid = sweep(rf, sign, {0.0}, {0}, {0, 1}, test_config());
  EXPECT_TRUE(grid.all_empty());
  for (const auto& c : grid.cells) EXPECT_GT(c.violation, 1e-6);
}

TEST(Sweep, LargeTauAlignsWithProxy) {
  const Eigen::Vector3d m(0.8, 0.3, -0.2);
  Eigen::Matrix3d a;
  a << 0.5, 0.1, 0.0, -0.1, 0.4, 0.1, 0.1, 0.0, 0.3;
  Eigen::Matrix3d s;
  s << 1.0, 0.2, 0.1, 0.2, 0.9, -0.1, 0.1, -0.1, 0.6;
  const auto rf = oracles::synthetic_reduced_form(a, s, {m}, 3);
  const auto sign = compile_sign(SignRestrictionSpec{}, rf);
  const auto grid = sweep(rf, sign, {1e6, kInf}, {0, 1, 2}, {0, 3}, test_config());
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t v = 0; v < 3; ++v) {
      for (std::size_t h = 0; h < 2; ++h) {
        const auto& cell = grid.cell(t, v, h);
        const double truth = (rf.irf[cell.horizon] * rf.chol).row(cell.variable).dot(m.normalized());
        ASSERT_FALSE(cell.empty);
        EXPECT_NEAR(cell.lower, truth, 1e-4);
        EXPECT_NEAR(cell.upper, truth, 1e-4);
      }
    }
  }
}

TEST(Sweep, NestedAcrossTau) {
  auto spec = oracles::three_variable_dgp(20, 5);
  spec.proxies = {{"m1", {0.5, 0.3, -0.2}, std::nullopt}, {"m2", {0.4, -0.2, 0.1}, std::nullopt}};
  const auto rf = population_rf(spec, 6);
  const auto sign = compile_sign(SignRestrictionSpec{}, rf);
  const std::vector<double> taus = {0.0, 0.5, 1.0, 2.0, 5.0};
  const auto grid = sweep(rf, sign, taus, {0, 1, 2}, {0, 2, 4, 6}, test_config());
  int flagged = 0;
  for (std::size_t t = 1; t < taus.size(); ++t) {
    for (std::size_t v = 0; v < 3; ++v) {
      for (std::size_t h = 0; h < 4; ++h) {
        const auto& now = grid.cell(t, v, h);
        const auto& before = grid.cell(t - 1, v, h);
        if (now.empty || before.empty) continue;
        EXPECT_LE(now.width(), before.width() + 1e-6);
        flagged += now.local_optimum;
      }
    }
  }
  EXPECT_EQ(flagged, grid.stats.flagged_cells);
  EXPECT_LE(flagged, 2);
}

TEST(Sweep, FlagMonotonicityMarksWideningCells) {
  IdentifiedSetGrid grid;
  grid.tau_grid = {0.0, 1.0};
  grid.variables = {0};
  grid.horizons = {0};
  BoundCell a;
  a.lower = -1.0;
  a.upper = 1.0;
  BoundCell b = a;
  b.tau = 1.0;
  b.upper = 1.2;
  grid.cells = {a, b};
  flag_monotonicity(grid);
  EXPECT_FALSE(grid.cells[0].local_optimum);
  EXPECT_TRUE(grid.cells[1].local_optimum);
}

TEST(Sweep, PointIdentifyingZooCollapsesSet) {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXd o0 = random_rotation(3, rng).matrix;
  const auto [m1, m2] = construct_point_id_zoo(o0, 2.0);
  Eigen::Matrix3d a = Eigen::Matrix3d::Identity() * 0.5;
  const auto rf = oracles::synthetic_reduced_form(a, Eigen::Matrix3d::Identity(), {m1, m2}, 2);
  const auto grid = sweep(rf, {}, {0.0, 1.0, 2.0}, {0, 1, 2}, {0, 2}, test_config());
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t h = 0; h < 2; ++h) {
      const auto& cell = grid.cell(2, v, h);
      ASSERT_FALSE(cell.empty);
      EXPECT_LT(cell.width(), 1e-4);
      const double truth = (rf.irf[cell.horizon]).row(cell.variable).dot(o0.col(0));
      EXPECT_NEAR(0.5 * (cell.lower + cell.upper), truth, 1e-4);
      EXPECT_GT(grid.cell(0, v, h).width(), 0.1);
    }
  }
}

TEST(Sweep, CoversPopulationTruth) {
  auto spec = oracles::three_variable_dgp(20, 9);
  spec.proxies = {{"m1", {0.6, 0.2, 0.0}, std::nullopt}, {"m2", {0.5, 0.0, -0.1}, std::nullopt}};
  const auto rf = population_rf(spec, 8);
  const auto sim = simulate([&] {
    auto s = spec;
    s.T = 20;
    return s;
  }());
  const auto sign = compile_sign(SignRestrictionSpec{}, rf);
  const std::vector<double> taus = {0.0, 1.0, 2.0, 3.0};
  const auto grid = sweep(rf, sign, taus, {0, 1, 2}, {0, 4, 8}, test_config());
  for (std::size_t t = 0; t < taus.size(); ++t) {
    for (std::size_t v = 0; v < 3; ++v) {
      for (std::size_t h = 0; h < 3; ++h) {
        const auto& cell = grid.cell(t, v, h);
        const double truth = sim.truth.first_shock_response(cell.horizon)(cell.variable);
        ASSERT_FALSE(cell.empty);
        EXPECT_LE(cell.lower, truth + 1e-6);
        EXPECT_GE(cell.upper, truth - 1e-6);
      }
    }
  }
}

TEST(Sweep, DeterministicForFixedSeed) {
  const auto rf = two_variable_rf({1.0, 0.4});
  const auto sign = compile_sign(SignRestrictionSpec{}, rf);
  auto cfg = test_config();
  const auto a = sweep(rf, sign, {0.5}, {0, 1}, {0, 1}, cfg);
  cfg.jobs = 2;
  const auto b = sweep(rf, sign, {0.5}, {0, 1}, {0, 1}, cfg);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].lower, b.cells[i].lower);
    EXPECT_EQ(a.cells[i].upper, b.cells[i].upper);
  }
}
