#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Core>

namespace proxyzoo {

/// Options for the PHR augmented-Lagrangian method with an inner BFGS loop.
/// Tolerances refer to the problem as the caller scales it.
struct AlOptions {
  double feasibility_target = 1e-10;
  double stationarity_target = 1e-9;
  int max_iterations = 2000;  ///< total inner iterations
  int max_outer = 60;
  double initial_penalty = 10.0;
  double max_penalty = 1e12;
  double max_step = 1.0;
};

template <class Point>
struct AlResult {
  Point point;
  double objective = 0.0;
  double violation = 0.0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
};

/// Minimizes f(x) subject to c_k(x) >= 0 (or == 0) on a manifold described
/// by the problem type, which provides:
///
///   int dimension() const;
///   Eigen::Index constraint_count() const;
///   bool is_equality(Eigen::Index k) const;
///   Point retract(const Point& x, const Eigen::VectorXd& step) const;
///   void evaluate(const Point& x, double& f, Eigen::VectorXd& c) const;
///   Eigen::VectorXd gradient(const Point& x, double wf, const Eigen::VectorXd& wc) const;
///
/// `gradient` returns the tangent-coordinate gradient of wf * f + sum wc_k c_k.
/// Tangent coordinates are treated as a common space across points (identity
/// transport), which is exact for Euclidean problems and left-invariant
/// coordinates on matrix groups.
template <class Problem, class Point>
AlResult<Point> minimize_augmented_lagrangian(const Problem& problem, Point start, const AlOptions& opt) {
  const int d = problem.dimension();
  const Eigen::Index m = problem.constraint_count();
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  double mu = opt.initial_penalty;

  auto violation_of = [&](const Eigen::VectorXd& c) {
    double v = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) v = std::max(v, problem.is_equality(k) ? std::abs(c(k)) : -c(k));
    return std::max(v, 0.0);
  };
  auto merit = [&](double f, const Eigen::VectorXd& c) {
    double phi = f;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (problem.is_equality(k) || c(k) < lambda(k) / mu) {
        phi += -lambda(k) * c(k) + 0.5 * mu * c(k) * c(k);
      } else {
        phi += -0.5 * lambda(k) * lambda(k) / mu;
      }
    }
    return phi;
  };
  auto merit_gradient = [&](const Point& x, const Eigen::VectorXd& c) {
    Eigen::VectorXd w(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      w(k) = (problem.is_equality(k) || c(k) < lambda(k) / mu) ? mu * c(k) - lambda(k) : 0.0;
    }
    return problem.gradient(x, 1.0, w);
  };

  AlResult<Point> result{start, 0.0, 0.0, 0, false};
  Point x = std::move(start);
  double f = 0.0;
  Eigen::VectorXd c(m);
  problem.evaluate(x, f, c);
  double previous_violation = violation_of(c);
  double inner_tol = 1e-3;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
  bool fresh = true;
  int iterations = 0;
  long evaluations = 0;

  for (int outer = 0; outer < opt.max_outer && iterations < opt.max_iterations; ++outer) {
    double phi = merit(f, c);
    Eigen::VectorXd g = merit_gradient(x, c);
    while (iterations < opt.max_iterations) {
      if (g.norm() <= inner_tol) break;
      Eigen::VectorXd p = -H * g;
      double slope = g.dot(p);
      if (!(slope < 0.0)) {
        H.setIdentity();
        fresh = true;
        p = -g;
        slope = -g.squaredNorm();
      }
      const double pn = p.norm();
      if (pn > opt.max_step) {
        p *= opt.max_step / pn;
        slope *= opt.max_step / pn;
      }
      double alpha = 1.0;
      Point trial;
      double f_trial = 0.0;
      Eigen::VectorXd c_trial(m);
      double phi_trial = 0.0;
      bool accepted = false;
      for (int backtrack = 0; backtrack < 40; ++backtrack) {
        trial = problem.retract(x, alpha * p);
        problem.evaluate(trial, f_trial, c_trial);
        ++evaluations;
        phi_trial = merit(f_trial, c_trial);
        if (phi_trial <= phi + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++iterations;
      if (!accepted) break;
      const Eigen::VectorXd g_trial = merit_gradient(trial, c_trial);
      const Eigen::VectorXd s = alpha * p;
      const Eigen::VectorXd y = g_trial - g;
      const double sy = s.dot(y);
      if (sy > 1e-14 * s.norm() * y.norm()) {
        if (fresh) {
          H *= sy / y.squaredNorm();
          fresh = false;
        }
        const double rho = 1.0 / sy;
        const Eigen::VectorXd Hy = H * y;
        H += (rho * rho * y.dot(Hy) + rho) * s * s.transpose() - rho * (Hy * s.transpose() + s * Hy.transpose());
      }
      const double decrease = phi - phi_trial;
      x = std::move(trial);
      f = f_trial;
      c = c_trial;
      phi = phi_trial;
      g = g_trial;
      if (decrease <= 1e-16 * std::max(1.0, std::abs(phi)) && s.norm() <= 1e-14) break;
    }

    const double v = violation_of(c);
    for (Eigen::Index k = 0; k < m; ++k) {
      lambda(k) = problem.is_equality(k) ? lambda(k) - mu * c(k) : std::max(0.0, lambda(k) - mu * c(k));
    }
    const double stationarity = g.norm();
    if (v <= opt.feasibility_target && stationarity <= std::max(inner_tol, opt.stationarity_target) &&
        inner_tol <= opt.stationarity_target) {
      result.converged = true;
      break;
    }
    if (v > 0.25 * previous_violation && v > opt.feasibility_target) mu = std::min(mu * 10.0, opt.max_penalty);
    previous_violation = v;
    inner_tol = std::max(0.1 * inner_tol, opt.stationarity_target);
  }

  result.point = std::move(x);
  result.objective = f;
  result.violation = violation_of(c);
  result.iterations = iterations;
  result.evaluations = evaluations;
  return result;
}

}  // namespace proxyzoo
