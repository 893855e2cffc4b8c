#include "proxyzoo/set_identification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "proxyzoo/error.hpp"
#include "proxyzoo/parallel.hpp"

namespace proxyzoo {

void SolverConfig::validate() const {
  if (restarts < 0) throw ValidationError("restarts must be non-negative");
  if (!(feasibility_tol > 0.0)) throw ValidationError("feasibility tolerance must be positive");
  if (!(objective_tol > 0.0)) throw ValidationError("objective tolerance must be positive");
  if (max_iterations < 1) throw ValidationError("iteration cap must be positive");
  if (jobs < 0) throw ValidationError("jobs must be non-negative");
}

AlOptions SolverConfig::al_options() const {
  AlOptions opt;
  opt.feasibility_target = std::min(1e-10, 1e-4 * feasibility_tol);
  opt.stationarity_target = std::min(1e-9, 0.1 * objective_tol);
  opt.max_iterations = max_iterations;
  return opt;
}

Eigen::MatrixXd StoredRotation::matrix() const {
  Eigen::MatrixXd o = exp_skew(params).matrix;
  if (reflected) o.col(params.n - 1) *= -1.0;
  return o;
}

std::optional<StoredRotation> StoredRotation::from_matrix(const Eigen::MatrixXd& orthogonal) {
  const int n = static_cast<int>(orthogonal.rows());
  Eigen::MatrixXd proper = reorthonormalize(orthogonal);
  const bool reflected = proper.determinant() < 0;
  if (reflected) proper.col(n - 1) *= -1.0;
  try {
    return StoredRotation{log_rotation(proper), reflected};
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

BoundProblem make_bound_problem(const ReducedForm& rf, const std::vector<LinearColumnConstraint>& sign,
                                const GrrConstraintSet& grr, int variable, int horizon, Sense sense) {
  const int n = rf.dim();
  if (variable < 0 || variable >= n) throw ValidationError("target variable out of range");
  if (horizon < 0 || horizon > rf.horizon()) throw ValidationError("target horizon exceeds H");
  BoundProblem p;
  p.objective = (rf.irf[horizon] * rf.chol).row(variable).transpose();
  p.sense = sense;
  p.constraints = constraint_system(sign, grr, n);
  return p;
}

LinearRotationProgram::LinearRotationProgram(const BoundProblem& problem)
    : n_(static_cast<int>(problem.objective.size())) {
  const Eigen::Index nn = static_cast<Eigen::Index>(n_) * n_;
  objective_ = Eigen::VectorXd::Zero(nn);
  const double fnorm = problem.objective.norm();
  const double fsign = problem.sense == Sense::min ? 1.0 : -1.0;
  if (fnorm > 0.0) objective_.head(n_) = fsign * problem.objective / fnorm;
  const auto k = static_cast<Eigen::Index>(problem.constraints.size());
  coefficients_.resize(k, nn);
  offsets_.resize(k);
  equality_.resize(problem.constraints.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& c = problem.constraints[static_cast<std::size_t>(i)];
    const double norm = c.coefficients.norm();
    const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
    coefficients_.row(i) = scale * Eigen::Map<const Eigen::VectorXd>(c.coefficients.data(), nn).transpose();
    offsets_(i) = scale * c.offset;
    equality_[static_cast<std::size_t>(i)] = c.equality;
  }
}

Eigen::MatrixXd LinearRotationProgram::retract(const Eigen::MatrixXd& rotation, const Eigen::VectorXd& step) const {
  const Eigen::MatrixXd s = skew_matrix(SkewParams{n_, step});
  return rotation * s.exp();
}

void LinearRotationProgram::evaluate(const Eigen::MatrixXd& rotation, double& f, Eigen::VectorXd& c) const {
  const Eigen::Map<const Eigen::VectorXd> vec(rotation.data(), rotation.size());
  f = objective_.dot(vec);
  c.noalias() = coefficients_ * vec;
  c -= offsets_;
}

Eigen::VectorXd LinearRotationProgram::gradient(const Eigen::MatrixXd& rotation, double wf,
                                                const Eigen::VectorXd& wc) const {
  Eigen::VectorXd g = wf * objective_;
  g.noalias() += coefficients_.transpose() * wc;
  const Eigen::Map<const Eigen::MatrixXd> G(g.data(), n_, n_);
  const Eigen::MatrixXd X = rotation.transpose() * G;
  Eigen::VectorXd grad(dimension());
  Eigen::Index k = 0;
  for (int a = 1; a < n_; ++a)
    for (int b = 0; b < a; ++b, ++k) grad(k) = X(a, b) - X(b, a);
  return grad;
}

BoundSolution solve_bound(const BoundProblem& problem, const std::vector<StoredRotation>& starts,
                          const SolverConfig& config) {
  if (starts.empty()) throw ValidationError("solve_bound needs at least one start");
  const LinearRotationProgram program(problem);
  const AlOptions options = config.al_options();
  const double direction = problem.sense == Sense::min ? 1.0 : -1.0;

  BoundSolution best;
  best.violation = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    auto local = minimize_augmented_lagrangian(program, start.matrix(), options);
    ++best.starts;
    best.iterations += local.iterations;
    // Report values at the stored representation so re-evaluation reproduces them.
    auto stored = StoredRotation::from_matrix(local.point);
    const Eigen::MatrixXd o = stored ? stored->matrix() : reorthonormalize(local.point);
    const double violation = check_feasibility(o, problem.constraints, config.feasibility_tol).max_violation;
    if (violation > config.feasibility_tol) {
      if (best.empty) best.violation = std::min(best.violation, violation);
      continue;
    }
    ++best.feasible_starts;
    const double value = problem.objective.dot(o.col(0));
    if (best.empty || direction * value < direction * best.value) {
      best.empty = false;
      best.value = value;
      best.argmin = stored;
      best.rotation = o;
      best.violation = violation;
    }
  }
  return best;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (std::uint64_t v : {a, b, c, d}) h = mix(h ^ v);
  return h;
}

std::vector<StoredRotation> default_starts(int n, int restarts, std::uint64_t seed,
                                           const std::optional<StoredRotation>& warm) {
  std::vector<StoredRotation> starts;
  starts.reserve(static_cast<std::size_t>(restarts) + 3);
  if (warm) starts.push_back(*warm);
  starts.push_back({SkewParams::zero(n), false});
  starts.push_back({SkewParams::zero(n), true});
  std::mt19937_64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    starts.push_back({random_rotation(n, rng).params, r % 2 == 1});
  }
  return starts;
}

const BoundCell& IdentifiedSetGrid::find(std::size_t tau_index, int variable, int horizon) const {
  const auto v = std::find(variables.begin(), variables.end(), variable);
  const auto h = std::find(horizons.begin(), horizons.end(), horizon);
  if (v == variables.end() || h == horizons.end()) throw ValidationError("cell not present in the grid");
  return cell(tau_index, static_cast<std::size_t>(v - variables.begin()),
              static_cast<std::size_t>(h - horizons.begin()));
}

bool IdentifiedSetGrid::all_empty() const {
  return std::all_of(cells.begin(), cells.end(), [](const BoundCell& c) { return c.empty; });
}

void flag_monotonicity(IdentifiedSetGrid& grid) {
  constexpr double kWidthSlack = 1e-6;
  constexpr double kInclusionSlack = 1e-5;
  for (std::size_t v = 0; v < grid.variables.size(); ++v) {
    for (std::size_t h = 0; h < grid.horizons.size(); ++h) {
      for (std::size_t t = 1; t < grid.tau_grid.size(); ++t) {
        const BoundCell& prev = grid.cell(t - 1, v, h);
        BoundCell& cur = grid.cells[grid.index(t, v, h)];
        if (cur.empty) continue;
        if (prev.empty || cur.width() > prev.width() + kWidthSlack || cur.lower < prev.lower - kInclusionSlack ||
            cur.upper > prev.upper + kInclusionSlack) {
          cur.local_optimum = true;
        }
      }
    }
  }
}

namespace {

void validate_grid(const ReducedForm& rf, const std::vector<double>& tau_grid, const std::vector<int>& variables,
                   const std::vector<int>& horizons) {
  if (tau_grid.empty()) throw ValidationError("tau grid is empty");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] >= 0.0)) throw ValidationError("tau grid values must be non-negative");
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) throw ValidationError("tau grid must be strictly ascending");
  }
  for (int v : variables)
    if (v < 0 || v >= rf.dim()) throw ValidationError("variable index out of range");
  for (int h : horizons)
    if (h < 0 || h > rf.horizon()) throw ValidationError("horizon exceeds the reduced-form horizon");
}

BoundCell fill_from(const BoundSolution& lo, const BoundSolution& hi, int variable, int horizon, double tau) {
  BoundCell cell;
  cell.variable = variable;
  cell.horizon = horizon;
  cell.tau = tau;
  cell.iterations = lo.iterations + hi.iterations;
  cell.starts = lo.starts + hi.starts;
  cell.empty = lo.empty || hi.empty;
  if (cell.empty) {
    cell.violation = std::min(lo.empty ? lo.violation : std::numeric_limits<double>::infinity(),
                              hi.empty ? hi.violation : std::numeric_limits<double>::infinity());
    cell.lower = std::numeric_limits<double>::quiet_NaN();
    cell.upper = std::numeric_limits<double>::quiet_NaN();
    return cell;
  }
  cell.lower = lo.value;
  cell.upper = hi.value;
  cell.violation = std::max(lo.violation, hi.violation);
  cell.argmin_lower = lo.argmin;
  cell.argmin_upper = hi.argmin;
  return cell;
}

}  // namespace

IdentifiedSetGrid sweep(const ReducedForm& rf, const std::vector<LinearColumnConstraint>& sign,
                        const std::vector<double>& tau_grid, const std::vector<int>& variables_in,
                        const std::vector<int>& horizons_in, const SolverConfig& config) {
  config.validate();
  std::vector<int> variables = variables_in;
  std::vector<int> horizons = horizons_in;
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
  validate_grid(rf, tau_grid, variables, horizons);
  const auto start_time = std::chrono::steady_clock::now();
  const int n = rf.dim();

  IdentifiedSetGrid grid;
  grid.tau_grid = tau_grid;
  grid.variables = variables;
  grid.horizons = horizons;
  grid.cells.resize(tau_grid.size() * variables.size() * horizons.size());

  std::vector<GrrConstraintSet> grr;
  grr.reserve(tau_grid.size());
  for (double tau : tau_grid) grr.push_back(compile_grr(rf.proxy_moments, tau, n));

  // Point-identifying tau: one feasibility solve, then every cell is the
  // response at that rotation.
  std::vector<std::optional<BoundSolution>> point_id(tau_grid.size());
  for (std::size_t t = 0; t < tau_grid.size(); ++t) {
    if (!grr[t].point_identifying() || rf.proxy_moments.empty()) continue;
    BoundProblem feas{Eigen::VectorXd::Zero(n), Sense::min, constraint_system(sign, grr[t], n)};
    auto starts = default_starts(n, config.restarts, derive_seed(config.seed, 0xF0, t));
    const Eigen::MatrixXd aligned = complete_basis(rf.proxy_moments.front());
    if (auto s = StoredRotation::from_matrix(aligned)) {
      starts.insert(starts.begin(), *s);
      StoredRotation flipped = *s;
      flipped.reflected = !flipped.reflected;
      starts.insert(starts.begin() + 1, flipped);
    }
    point_id[t] = solve_bound(feas, starts, config);
  }

  const std::size_t tasks = tau_grid.size() * variables.size();
  parallel_for(tasks, config.jobs, [&](std::size_t task) {
    const std::size_t t = task / variables.size();
    const std::size_t v = task % variables.size();
    const int variable = variables[v];
    if (point_id[t]) {
      const BoundSolution& sol = *point_id[t];
      for (std::size_t h = 0; h < horizons.size(); ++h) {
        BoundSolution at = sol;
        if (!sol.empty) at.value = ((rf.irf[horizons[h]] * rf.chol).row(variable) * sol.rotation.col(0))(0);
        BoundCell cell = fill_from(at, at, variable, horizons[h], tau_grid[t]);
        cell.iterations = h == 0 ? sol.iterations : 0;
        cell.starts = h == 0 ? sol.starts : 0;
        grid.cells[grid.index(t, v, h)] = std::move(cell);
      }
      return;
    }
    std::optional<StoredRotation> warm_lo;
    std::optional<StoredRotation> warm_hi;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      const int horizon = horizons[h];
      BoundProblem lo_problem = make_bound_problem(rf, sign, grr[t], variable, horizon, Sense::min);
      BoundProblem hi_problem = lo_problem;
      hi_problem.sense = Sense::max;
      const auto lo = solve_bound(
          lo_problem, default_starts(n, config.restarts, derive_seed(config.seed, t, variable, horizon, 0), warm_lo),
          config);
      const auto hi = solve_bound(
          hi_problem, default_starts(n, config.restarts, derive_seed(config.seed, t, variable, horizon, 1), warm_hi),
          config);
      warm_lo = lo.argmin;
      warm_hi = hi.argmin;
      grid.cells[grid.index(t, v, h)] = fill_from(lo, hi, variable, horizon, tau_grid[t]);
    }
  });

  flag_monotonicity(grid);
  for (const auto& c : grid.cells) {
    grid.stats.iterations += c.iterations;
    grid.stats.starts += c.starts;
    if (c.empty) {
      ++grid.stats.empty_cells;
    } else {
      grid.stats.max_violation = std::max(grid.stats.max_violation, c.violation);
    }
    if (c.local_optimum) ++grid.stats.flagged_cells;
  }
  grid.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return grid;
}

}  // namespace proxyzoo
