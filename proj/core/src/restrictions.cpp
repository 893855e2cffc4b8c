#include "proxyzoo/restrictions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxyzoo/error.hpp"
#include "proxyzoo/log.hpp"

namespace proxyzoo {

SignDirection parse_sign_direction(std::string_view text) {
  if (text == ">=0" || text == "+" || text == "positive" || text == "nonnegative") return SignDirection::nonnegative;
  if (text == "<=0" || text == "-" || text == "negative" || text == "nonpositive") return SignDirection::nonpositive;
  throw ValidationError("unknown sign direction '" + std::string(text) + "'");
}

std::string_view to_string(SignDirection direction) {
  return direction == SignDirection::nonnegative ? ">=0" : "<=0";
}

namespace {

double signum(SignDirection direction) { return direction == SignDirection::nonnegative ? 1.0 : -1.0; }

void push_nonzero(std::vector<LinearColumnConstraint>& out, LinearColumnConstraint c) {
  if (!(c.r.norm() > 0.0)) {
    log::warn("dropping restriction " + c.label + ": constraint vector is zero");
    return;
  }
  out.push_back(std::move(c));
}

}  // namespace

std::vector<LinearColumnConstraint> compile_sign(const SignRestrictionSpec& spec, const ReducedForm& rf) {
  const int n = rf.dim();
  const auto name = [&](int i) { return i < static_cast<int>(rf.names.size()) ? rf.names[i] : std::to_string(i); };
  std::vector<LinearColumnConstraint> out;
  if (spec.self_sign) {
    for (int i = 0; i < n; ++i) {
      push_nonzero(out, {i, rf.chol.row(i).transpose(), 0.0, "self_sign(" + name(i) + ")"});
    }
  }
  for (const auto& e : spec.irf_entries) {
    if (e.variable < 0 || e.variable >= n || e.shock < 0 || e.shock >= n) {
      throw ValidationError("sign restriction index out of range");
    }
    if (e.horizon < 0 || e.horizon > rf.horizon()) {
      throw ValidationError("sign restriction horizon " + std::to_string(e.horizon) + " exceeds H = " +
                            std::to_string(rf.horizon()));
    }
    Eigen::VectorXd r = signum(e.direction) * (rf.irf[e.horizon] * rf.chol).row(e.variable).transpose();
    push_nonzero(out, {e.shock, std::move(r), 0.0,
                       "irf(" + name(e.variable) + ",shock" + std::to_string(e.shock + 1) + ",h" +
                           std::to_string(e.horizon) + ")" + std::string(to_string(e.direction))});
  }
  if (!spec.narrative_entries.empty()) {
    const Eigen::MatrixXd linv = rf.chol.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    for (const auto& e : spec.narrative_entries) {
      if (e.shock < 0 || e.shock >= n) throw ValidationError("narrative shock index out of range");
      const Eigen::Index row = rf.residual_row(e.date);
      if (row < 0) throw ValidationError("narrative date " + e.date.text() + " is outside the residual sample");
      Eigen::VectorXd r = signum(e.direction) * (linv * rf.residuals.row(row).transpose());
      push_nonzero(out, {e.shock, std::move(r), 0.0,
                         "narrative(shock" + std::to_string(e.shock + 1) + "," + e.date.text() + ")" +
                             std::string(to_string(e.direction))});
    }
  }
  return out;
}

bool GrrConstraintSet::point_identifying() const { return std::isinf(tau); }

GrrConstraintSet compile_grr(const std::vector<Eigen::VectorXd>& moments, double tau, int n) {
  if (!(tau >= 0.0)) throw ValidationError("tau must be non-negative");
  if (n < 2) throw ValidationError("compile_grr needs n >= 2");
  GrrConstraintSet set;
  set.tau = tau;
  set.n = n;
  set.moments = moments;
  for (int l = 0; l < static_cast<int>(moments.size()); ++l) {
    if (moments[l].size() != n) throw ValidationError("proxy moment has wrong dimension");
    if (!(moments[l].norm() > 0.0) || !moments[l].allFinite()) {
      throw ValidationError("proxy moment " + std::to_string(l + 1) + " is zero or not finite");
    }
    if (tau == 0.0) {
      set.relevance.push_back(l);
    } else if (std::isinf(tau)) {
      set.relevance.push_back(l);
      for (int j = 1; j < n; ++j) set.equalities.emplace_back(l, j);
    } else {
      for (int j = 1; j < n; ++j) {
        set.half_spaces.push_back({l, j, 1.0});
        set.half_spaces.push_back({l, j, -1.0});
      }
    }
  }
  return set;
}

std::vector<LinearConstraint> GrrConstraintSet::constraints() const {
  std::vector<LinearConstraint> out;
  out.reserve(size());
  const double scale = std::isfinite(tau) ? 1.0 / std::max(1.0, tau) : 1.0;
  for (const auto& h : half_spaces) {
    LinearConstraint c{Eigen::MatrixXd::Zero(n, n), 0.0, false, {}};
    c.coefficients.col(0) = scale * moments[h.proxy];
    c.coefficients.col(h.column) = -h.sign * tau * scale * moments[h.proxy];
    c.label = "grr(proxy" + std::to_string(h.proxy + 1) + ",col" + std::to_string(h.column + 1) +
              (h.sign > 0 ? ",+)" : ",-)");
    out.push_back(std::move(c));
  }
  for (int l : relevance) {
    LinearConstraint c{Eigen::MatrixXd::Zero(n, n), 0.0, false, "relevance(proxy" + std::to_string(l + 1) + ")"};
    c.coefficients.col(0) = moments[l];
    out.push_back(std::move(c));
  }
  for (const auto& [l, j] : equalities) {
    LinearConstraint c{Eigen::MatrixXd::Zero(n, n), 0.0, true,
                       "exogeneity(proxy" + std::to_string(l + 1) + ",col" + std::to_string(j + 1) + ")"};
    c.coefficients.col(j) = moments[l];
    out.push_back(std::move(c));
  }
  return out;
}

LinearConstraint to_linear(const LinearColumnConstraint& constraint, int n) {
  if (constraint.column < 0 || constraint.column >= n || constraint.r.size() != n) {
    throw ValidationError("sign constraint does not match dimension " + std::to_string(n));
  }
  LinearConstraint c{Eigen::MatrixXd::Zero(n, n), constraint.offset, false, constraint.label};
  c.coefficients.col(constraint.column) = constraint.r;
  return c;
}

std::vector<LinearConstraint> constraint_system(const std::vector<LinearColumnConstraint>& sign,
                                                const GrrConstraintSet& grr, int n) {
  std::vector<LinearConstraint> out;
  out.reserve(sign.size() + grr.size());
  for (const auto& s : sign) out.push_back(to_linear(s, n));
  if (!grr.moments.empty()) {
    if (grr.n != n) throw ValidationError("ranking restrictions compiled for a different dimension");
    auto g = grr.constraints();
    std::move(g.begin(), g.end(), std::back_inserter(out));
  }
  return out;
}

double constraint_value(const LinearConstraint& constraint, const Eigen::MatrixXd& rotation) {
  return constraint.coefficients.cwiseProduct(rotation).sum() - constraint.offset;
}

FeasibilityReport check_feasibility(const Eigen::MatrixXd& rotation, const std::vector<LinearConstraint>& constraints,
                                    double slack) {
  FeasibilityReport report;
  for (const auto& c : constraints) {
    const double v = constraint_value(c, rotation);
    const double violation = c.equality ? std::abs(v) : std::max(0.0, -v);
    report.max_violation = std::max(report.max_violation, violation);
  }
  report.feasible = report.max_violation <= slack;
  return report;
}

FeasibilityReport check_feasibility(const Eigen::MatrixXd& rotation,
                                    const std::vector<LinearColumnConstraint>& sign, const GrrConstraintSet& grr,
                                    double slack) {
  return check_feasibility(rotation, constraint_system(sign, grr, static_cast<int>(rotation.rows())), slack);
}

}  // namespace proxyzoo
