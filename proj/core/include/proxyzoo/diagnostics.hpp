#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxyzoo/restrictions.hpp"
#include "proxyzoo/set_identification.hpp"
#include "proxyzoo/timeseries_io.hpp"
#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo {

enum class ClaimKind { sign_positive, sign_negative, joint_sign, magnitude };

ClaimKind parse_claim_kind(std::string_view text);
std::string_view to_string(ClaimKind kind);

/// Response of `variable` at each horizon lies on the `direction` side of
/// `threshold` (>= threshold for nonnegative, <= threshold for nonpositive).
struct ClaimTarget {
  int variable = 0;
  std::vector<int> horizons;
  double threshold = 0.0;
  SignDirection direction = SignDirection::nonnegative;
};

struct Claim {
  std::string name;
  ClaimKind kind = ClaimKind::sign_positive;
  std::vector<ClaimTarget> targets;

  void validate(int n, int horizon) const;
  std::vector<int> variables() const;
  std::vector<int> horizons() const;
};

struct ClaimCheck {
  bool holds = false;
  bool vacuous = false;  ///< some target cell was empty
};

/// Evaluates the claim on interval endpoints at one tau index of a grid.
ClaimCheck evaluate_claim(const Claim& claim, const IdentifiedSetGrid& grid, std::size_t tau_index);

struct BreakdownResult {
  std::optional<double> tau_star;  ///< empty: not supported at the grid maximum
  bool vacuous = false;            ///< an empty identified set was met along the way
  bool monotonicity_violation = false;
  std::vector<std::pair<double, bool>> evaluations;  ///< (tau, holds) in evaluation order
};

struct BreakdownOptions {
  bool refine = true;
  double resolution = 0.01;
};

/// Smallest tau on the ascending grid at which the claim holds, refined by
/// bisection between the bracketing grid points. The scan stops at the first
/// grid point where the claim holds.
BreakdownResult breakdown_value(const Claim& claim, const ReducedForm& rf,
                                const std::vector<LinearColumnConstraint>& sign, const std::vector<double>& tau_grid,
                                const SolverConfig& config, const BreakdownOptions& options = {});

struct KappaCell {
  int variable = 0;
  int horizon = 0;
  double kappa = 0.0;
  double width_full = 0.0;
  double width_sign = 0.0;
  bool full_empty = false;
};

struct InfoReport {
  double tau_used = 0.0;
  double kappa_full = 0.0;
  std::vector<KappaCell> kappa_cells;
  int excluded_cells = 0;  ///< zero-width sign-only baseline
  int empty_cells = 0;     ///< empty full-zoo set, counted as width 0
};

/// kappa_{i,h} = 1 - width_full / width_sign averaged over included cells.
/// Both grids must share variables and horizons; `tau_index` selects the
/// full-zoo tau, the sign-only grid uses its first tau.
InfoReport zoo_information(const IdentifiedSetGrid& full, const IdentifiedSetGrid& sign_only,
                           std::size_t tau_index = 0);

struct LopoEntry {
  std::string label;
  double kappa_without = 0.0;
  double delta = 0.0;
  bool negative_caveat = false;  ///< delta < 0: local-optimum artefact, reported raw
};

struct LopoReport {
  InfoReport full;
  std::vector<LopoEntry> entries;
};

/// Leave-one-proxy-out: delta_l = kappa(full) - kappa(without l).
LopoReport lopo(const ReducedForm& rf, const std::vector<LinearColumnConstraint>& sign, double tau,
                const std::vector<int>& variables, const std::vector<int>& horizons, const SolverConfig& config);

struct CorrelationCell {
  bool available = false;
  double corr = 0.0;
  double p_value = 1.0;
  Eigen::Index overlap = 0;
};

struct CorrelationMap {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<CorrelationCell>> cells;
};

/// "p<=0.01", "p<=0.05", "p<=0.10", "n.s." or "NA".
std::string significance_bucket(const CorrelationCell& cell);

/// Pearson correlation on dates where both series are observed; two-sided
/// p-value from t = r sqrt((T - 2) / (1 - r^2)) with T - 2 degrees of freedom.
/// Series are matched by date; cells with fewer than `min_overlap` common
/// observations are NA.
CorrelationMap correlation_map(const std::vector<ProxySeries>& a, const std::vector<ProxySeries>& b,
                               Eigen::Index min_overlap = 10);

/// Responses C_h L M / |M| to the shock identified by treating proxy `proxy`
/// as a valid instrument, h = 0..H. With normalize_variable >= 0 every
/// response is divided by the impact response of that variable.
std::vector<Eigen::VectorXd> point_identified_irf(const ReducedForm& rf, int proxy, int normalize_variable = -1);

}  // namespace proxyzoo
