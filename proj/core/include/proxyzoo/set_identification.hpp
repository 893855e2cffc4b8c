#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "proxyzoo/augmented_lagrangian.hpp"
#include "proxyzoo/restrictions.hpp"
#include "proxyzoo/rotation.hpp"
#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo {

struct SolverConfig {
  int restarts = 20;
  double feasibility_tol = 1e-6;
  double objective_tol = 1e-8;
  int max_iterations = 2000;
  std::uint64_t seed = 20240601;
  int jobs = 0;  ///< 0 = one per hardware thread

  void validate() const;
  AlOptions al_options() const;
};

enum class Sense { min, max };

/// A point of O(n): exp(S) for the proper sheet, exp(S) D for the reflected
/// sheet with D = diag(1, ..., 1, -1). The reflected sheet matters because
/// self-sign restrictions on every column cut across both components.
struct StoredRotation {
  SkewParams params;
  bool reflected = false;

  Eigen::MatrixXd matrix() const;
  /// Empty when the rotation sits on the logarithm branch cut.
  static std::optional<StoredRotation> from_matrix(const Eigen::MatrixXd& orthogonal);
};

/// Optimize objective' O_{.1} over rotations satisfying `constraints`.
struct BoundProblem {
  Eigen::VectorXd objective;
  Sense sense = Sense::min;
  std::vector<LinearConstraint> constraints;
};

/// Objective (C_h L)' e_i on the first column; constraints = sign + ranking.
BoundProblem make_bound_problem(const ReducedForm& rf, const std::vector<LinearColumnConstraint>& sign,
                                const GrrConstraintSet& grr, int variable, int horizon, Sense sense);

struct BoundSolution {
  bool empty = true;
  double value = 0.0;
  std::optional<StoredRotation> argmin;
  Eigen::MatrixXd rotation;
  double violation = 0.0;  ///< at the argmin, or the smallest attained violation when empty
  int iterations = 0;
  int starts = 0;
  int feasible_starts = 0;
};

/// Smooth program handed to the augmented-Lagrangian solver: linear
/// objective and constraints in O, each scaled to unit norm, with moves
/// O -> O exp(S(step)).
class LinearRotationProgram {
 public:
  explicit LinearRotationProgram(const BoundProblem& problem);

  int dimension() const { return n_ * (n_ - 1) / 2; }
  Eigen::Index constraint_count() const { return coefficients_.rows(); }
  bool is_equality(Eigen::Index k) const { return equality_[static_cast<std::size_t>(k)]; }
  Eigen::MatrixXd retract(const Eigen::MatrixXd& rotation, const Eigen::VectorXd& step) const;
  void evaluate(const Eigen::MatrixXd& rotation, double& f, Eigen::VectorXd& c) const;
  Eigen::VectorXd gradient(const Eigen::MatrixXd& rotation, double wf, const Eigen::VectorXd& wc) const;

 private:
  int n_;
  Eigen::VectorXd objective_;      ///< n^2, column-major vec of the objective matrix
  Eigen::MatrixXd coefficients_;   ///< K x n^2
  Eigen::VectorXd offsets_;
  std::vector<bool> equality_;
};

/// Local solves from every start; the best feasible value wins. EMPTY when
/// no start reaches violation <= feasibility_tol.
BoundSolution solve_bound(const BoundProblem& problem, const std::vector<StoredRotation>& starts,
                          const SolverConfig& config);

/// Starts used by the sweep: optional warm start, identity on both sheets
/// and `restarts` Haar draws alternating between sheets.
std::vector<StoredRotation> default_starts(int n, int restarts, std::uint64_t seed,
                                           const std::optional<StoredRotation>& warm = std::nullopt);

struct BoundCell {
  int variable = 0;
  int horizon = 0;
  double tau = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool empty = false;
  double violation = 0.0;
  bool local_optimum = false;  ///< width grew or the interval escaped the smaller-tau interval
  int iterations = 0;
  int starts = 0;
  std::optional<StoredRotation> argmin_lower;
  std::optional<StoredRotation> argmin_upper;

  double width() const { return empty ? 0.0 : upper - lower; }
};

struct SolverStats {
  long long iterations = 0;
  long long starts = 0;
  double max_violation = 0.0;
  int empty_cells = 0;
  int flagged_cells = 0;
  double seconds = 0.0;
};

struct IdentifiedSetGrid {
  std::vector<double> tau_grid;
  std::vector<int> variables;
  std::vector<int> horizons;
  std::vector<BoundCell> cells;  ///< tau-major, then variable, then horizon
  SolverStats stats;

  std::size_t index(std::size_t tau_index, std::size_t variable_index, std::size_t horizon_index) const {
    return (tau_index * variables.size() + variable_index) * horizons.size() + horizon_index;
  }
  const BoundCell& cell(std::size_t tau_index, std::size_t variable_index, std::size_t horizon_index) const {
    return cells[index(tau_index, variable_index, horizon_index)];
  }
  /// Cell lookup by variable/horizon value; throws when absent.
  const BoundCell& find(std::size_t tau_index, int variable, int horizon) const;
  bool all_empty() const;
};

/// Identified-set bounds for every (tau, variable, horizon). Ranking
/// restrictions come from rf.proxy_moments (none: sign-only sets). Horizons
/// are solved in ascending order per (variable, tau) with the previous
/// horizon's optimum as warm start; (variable, tau) tasks run in parallel.
IdentifiedSetGrid sweep(const ReducedForm& rf, const std::vector<LinearColumnConstraint>& sign,
                        const std::vector<double>& tau_grid, const std::vector<int>& variables,
                        const std::vector<int>& horizons, const SolverConfig& config);

/// Sets the local_optimum flag on cells that break set inclusion in tau.
void flag_monotonicity(IdentifiedSetGrid& grid);

/// Deterministic 64-bit seed derived from a base seed and indices.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                          std::uint64_t d = 0);

}  // namespace proxyzoo
