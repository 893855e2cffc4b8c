#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "proxyzoo/restrictions.hpp"
#include "proxyzoo/set_identification.hpp"

namespace proxyzoo {

/// Half-angle of the cap around M_l that contains the first rotation column
/// at quality tau: atan(sqrt(n - 1) / tau), with rho(0) = pi/2 and
/// rho(inf) = 0.
double rho(double tau, int n);

struct TauBoundResult {
  double c_star = 0.0;
  double tau_bar = 0.0;             ///< +infinity when c_star = 1
  Eigen::VectorXd arg_q;            ///< unit vector attaining c_star
  std::vector<double> angles;       ///< angle between arg_q and each M_l, radians
  std::optional<double> oracle_gap; ///< relative gap to a grid oracle, when supplied
  int iterations = 0;
  int starts = 0;
};

/// max over unit q of min_l M_l' q / |M_l|, subject to the first-column sign
/// constraints (columns other than the first do not constrain q). Solved in
/// epigraph form over (p, t) with q = p / |p|. Throws
/// ValidationError("empty sign-feasible sphere region") when no start
/// reaches feasibility.
TauBoundResult solve_cstar(const std::vector<Eigen::VectorXd>& moments,
                           const std::vector<LinearColumnConstraint>& sign, const SolverConfig& config,
                           const std::vector<Eigen::VectorXd>& extra_starts = {});

/// sqrt(n - 1) c / sqrt(1 - c^2); infinity when c is within 1e-9 of 1.
double tau_bar(double c_star, int n);

/// Moment pair for which tau0 point-identifies the first column O0_{.1}.
std::pair<Eigen::VectorXd, Eigen::VectorXd> construct_point_id_zoo(const Eigen::MatrixXd& o0, double tau0);

/// Epigraph program in (p, t); exposed for tests.
class CstarProgram {
 public:
  CstarProgram(const std::vector<Eigen::VectorXd>& moments, const std::vector<LinearColumnConstraint>& sign);

  int dimension() const { return n_ + 1; }
  Eigen::Index constraint_count() const { return rows_.rows(); }
  bool is_equality(Eigen::Index) const { return false; }
  Eigen::VectorXd retract(const Eigen::VectorXd& x, const Eigen::VectorXd& step) const;
  void evaluate(const Eigen::VectorXd& x, double& f, Eigen::VectorXd& c) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, double wf, const Eigen::VectorXd& wc) const;

  /// min_l cosine and the largest sign violation at q.
  double min_cosine(const Eigen::VectorXd& q) const;
  double sign_violation(const Eigen::VectorXd& q) const;

 private:
  int n_;
  Eigen::Index proxies_;
  Eigen::MatrixXd rows_;      ///< unit M_l rows then unit sign rows
  Eigen::VectorXd offsets_;
};

}  // namespace proxyzoo
