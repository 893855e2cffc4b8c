#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "proxyzoo/timeseries_io.hpp"
#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo {

enum class SignDirection { nonnegative, nonpositive };

SignDirection parse_sign_direction(std::string_view text);
std::string_view to_string(SignDirection direction);

/// Sign of the response of `variable` to `shock` at `horizon` (0-based indices).
struct IrfSignEntry {
  int variable = 0;
  int shock = 0;
  int horizon = 0;
  SignDirection direction = SignDirection::nonnegative;
};

/// Sign of structural shock `shock` on a given date.
struct NarrativeEntry {
  int shock = 0;
  DateKey date;
  SignDirection direction = SignDirection::nonnegative;
};

struct SignRestrictionSpec {
  std::vector<IrfSignEntry> irf_entries;
  std::vector<NarrativeEntry> narrative_entries;
  /// Each shock raises its own variable on impact (all n columns).
  bool self_sign = true;
};

/// r' O_{.column} >= offset.
struct LinearColumnConstraint {
  int column = 0;
  Eigen::VectorXd r;
  double offset = 0.0;
  std::string label;
};

/// <coefficients, O>_F >= offset, or == offset for equalities. Every
/// restriction in the library is linear in the rotation matrix.
struct LinearConstraint {
  Eigen::MatrixXd coefficients;
  double offset = 0.0;
  bool equality = false;
  std::string label;
};

/// One half of the absolute-value ranking constraint
/// O_1' M >= sign * tau * O_j' M.
struct GrrHalfSpace {
  int proxy = 0;
  int column = 0;
  double sign = 1.0;
};

/// Ranking restrictions at a common quality tau for every proxy. For finite
/// tau > 0 the absolute values are split into two half-spaces per
/// (proxy, column j >= 2); tau = 0 keeps only O_1' M >= 0; tau = infinity
/// becomes O_j' M = 0 for j >= 2 plus O_1' M >= 0.
struct GrrConstraintSet {
  double tau = 0.0;
  int n = 0;
  std::vector<Eigen::VectorXd> moments;
  std::vector<GrrHalfSpace> half_spaces;
  std::vector<int> relevance;                     ///< proxies with a bare O_1' M >= 0
  std::vector<std::pair<int, int>> equalities;    ///< (proxy, column) with O_j' M = 0

  bool point_identifying() const;
  std::size_t size() const { return half_spaces.size() + relevance.size() + equalities.size(); }

  /// Half-spaces are divided by max(1, tau) so violations stay comparable
  /// across the tau grid.
  std::vector<LinearConstraint> constraints() const;
};

std::vector<LinearColumnConstraint> compile_sign(const SignRestrictionSpec& spec, const ReducedForm& rf);

GrrConstraintSet compile_grr(const std::vector<Eigen::VectorXd>& moments, double tau, int n);

LinearConstraint to_linear(const LinearColumnConstraint& constraint, int n);

/// Sign constraints followed by the ranking constraints.
std::vector<LinearConstraint> constraint_system(const std::vector<LinearColumnConstraint>& sign,
                                                const GrrConstraintSet& grr, int n);

/// Constraint value minus offset; negative means violated for inequalities.
double constraint_value(const LinearConstraint& constraint, const Eigen::MatrixXd& rotation);

struct FeasibilityReport {
  bool feasible = true;
  double max_violation = 0.0;
};

FeasibilityReport check_feasibility(const Eigen::MatrixXd& rotation, const std::vector<LinearConstraint>& constraints,
                                    double slack);
FeasibilityReport check_feasibility(const Eigen::MatrixXd& rotation,
                                    const std::vector<LinearColumnConstraint>& sign, const GrrConstraintSet& grr,
                                    double slack);

}  // namespace proxyzoo
