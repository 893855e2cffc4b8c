#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "proxyzoo/restrictions.hpp"
#include "proxyzoo/synthetic_dgp.hpp"
#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo::oracles {

/// Feasible range of f' O_{.1} over O(2) by scanning `points` angles on both
/// sheets. Feasibility transitions between neighbouring grid points are
/// bisected to machine precision and unconstrained stationary points are
/// added when feasible, so the result is exact up to rounding.
struct CircleRange {
  bool empty = true;
  double lower = 0.0;
  double upper = 0.0;
};
CircleRange circle_grid_range(const Eigen::Vector2d& f, const std::vector<LinearConstraint>& constraints,
                              int points = 100000, double slack = 0.0);

/// Quasi-uniform (Fibonacci) points on the unit sphere in R^3.
std::vector<Eigen::Vector3d> fibonacci_sphere(int points);

/// max over the grid of min_l cos(M_l, q) subject to r' q >= 0 for every r,
/// followed by two local refinement patches of `points` around the best point.
struct SphereMaxMin {
  bool empty = true;
  double value = 0.0;
  Eigen::Vector3d arg;
};
SphereMaxMin sphere_grid_cstar(const std::vector<Eigen::VectorXd>& moments, const std::vector<Eigen::VectorXd>& cones,
                               int points = 100000);

/// A^h by repeated multiplication.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& a, int h);

/// Direct evaluation of O_1' M >= tau |O_j' M| for all j >= 2.
bool grr_holds(const Eigen::MatrixXd& o, const Eigen::VectorXd& m, double tau, double slack = 0.0);

/// Stable three-variable SVAR(1) used across tests.
DgpSpec three_variable_dgp(int T, std::uint64_t seed);

/// Reduced form with given A (VAR(1)), Sigma and moments, no data.
ReducedForm synthetic_reduced_form(const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma,
                                   std::vector<Eigen::VectorXd> moments, int horizon);

/// simulate + estimate with the proxies aligned (zero policy).
ReducedForm estimate_from_simulation(const Simulation& sim, int lag_order, int horizon);

}  // namespace proxyzoo::oracles
