#include "proxyzoo/quality_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "proxyzoo/error.hpp"

namespace proxyzoo {

double rho(double tau, int n) {
  if (n < 2) throw ValidationError("rho needs n >= 2");
  if (!(tau >= 0.0)) throw ValidationError("tau must be non-negative");
  if (tau == 0.0) return std::numbers::pi / 2.0;
  if (std::isinf(tau)) return 0.0;
  return std::atan(std::sqrt(static_cast<double>(n - 1)) / tau);
}

double tau_bar(double c_star, int n) {
  if (n < 2) throw ValidationError("tau_bar needs n >= 2");
  if (!(c_star >= 0.0) || c_star > 1.0 + 1e-9) throw ValidationError("c* must lie in [0, 1]");
  if (c_star >= 1.0 - 1e-9) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(n - 1)) * c_star / std::sqrt(1.0 - c_star * c_star);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> construct_point_id_zoo(const Eigen::MatrixXd& o0, double tau0) {
  if (!(tau0 >= 1.0)) throw ValidationError("construct_point_id_zoo needs tau0 >= 1");
  const Eigen::Index n = o0.rows();
  if (n < 2 || o0.cols() != n) throw ValidationError("O0 must be square with n >= 2");
  const double r = rho(tau0, static_cast<int>(n));
  const Eigen::VectorXd rest = o0.rightCols(n - 1).rowwise().sum();
  const double s = std::sin(r) / std::sqrt(static_cast<double>(n - 1));
  Eigen::VectorXd m1 = std::cos(r) * o0.col(0) + s * rest;
  Eigen::VectorXd m2 = std::cos(r) * o0.col(0) - s * rest;
  return {m1, m2};
}

CstarProgram::CstarProgram(const std::vector<Eigen::VectorXd>& moments,
                           const std::vector<LinearColumnConstraint>& sign) {
  if (moments.empty()) throw ValidationError("c* needs at least one proxy moment");
  n_ = static_cast<int>(moments.front().size());
  proxies_ = static_cast<Eigen::Index>(moments.size());
  std::vector<const LinearColumnConstraint*> first;
  for (const auto& s : sign)
    if (s.column == 0 && s.r.norm() > 0.0) first.push_back(&s);
  rows_.resize(proxies_ + static_cast<Eigen::Index>(first.size()), n_);
  offsets_ = Eigen::VectorXd::Zero(rows_.rows());
  for (Eigen::Index l = 0; l < proxies_; ++l) {
    const auto& m = moments[static_cast<std::size_t>(l)];
    if (m.size() != n_) throw ValidationError("proxy moments differ in dimension");
    if (!(m.norm() > 0.0)) throw ValidationError("proxy moment " + std::to_string(l + 1) + " is zero");
    rows_.row(l) = m.normalized().transpose();
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double norm = first[i]->r.norm();
    rows_.row(proxies_ + static_cast<Eigen::Index>(i)) = first[i]->r.transpose() / norm;
    offsets_(proxies_ + static_cast<Eigen::Index>(i)) = first[i]->offset / norm;
  }
}

Eigen::VectorXd CstarProgram::retract(const Eigen::VectorXd& x, const Eigen::VectorXd& step) const {
  Eigen::VectorXd y = x + step;
  const double norm = y.head(n_).norm();
  if (norm > 0.0) y.head(n_) /= norm;
  return y;
}

void CstarProgram::evaluate(const Eigen::VectorXd& x, double& f, Eigen::VectorXd& c) const {
  const Eigen::VectorXd q = x.head(n_).normalized();
  const double t = x(n_);
  f = -t;
  c.noalias() = rows_ * q;
  c -= offsets_;
  c.head(proxies_).array() -= t;
}

Eigen::VectorXd CstarProgram::gradient(const Eigen::VectorXd& x, double wf, const Eigen::VectorXd& wc) const {
  const double norm = x.head(n_).norm();
  const Eigen::VectorXd q = x.head(n_) / norm;
  const Eigen::VectorXd a = rows_.transpose() * wc;
  Eigen::VectorXd g(n_ + 1);
  g.head(n_) = (a - q * q.dot(a)) / norm;
  g(n_) = -wf - wc.head(proxies_).sum();
  return g;
}

double CstarProgram::min_cosine(const Eigen::VectorXd& q) const {
  return (rows_.topRows(proxies_) * q.normalized()).minCoeff();
}

double CstarProgram::sign_violation(const Eigen::VectorXd& q) const {
  if (rows_.rows() == proxies_) return 0.0;
  const Eigen::VectorXd v =
      rows_.bottomRows(rows_.rows() - proxies_) * q.normalized() - offsets_.tail(rows_.rows() - proxies_);
  return std::max(0.0, -v.minCoeff());
}

TauBoundResult solve_cstar(const std::vector<Eigen::VectorXd>& moments,
                           const std::vector<LinearColumnConstraint>& sign, const SolverConfig& config,
                           const std::vector<Eigen::VectorXd>& extra_starts) {
  config.validate();
  const CstarProgram program(moments, sign);
  const int n = program.dimension() - 1;
  AlOptions options = config.al_options();

  std::vector<Eigen::VectorXd> starts = extra_starts;
  for (const auto& m : moments) starts.push_back(m.normalized());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  for (const auto& m : moments) mean += m.normalized();
  if (mean.norm() > 1e-12) starts.push_back(mean.normalized());
  std::mt19937_64 rng(derive_seed(config.seed, 0xC5));
  std::normal_distribution<double> normal;
  for (int r = 0; r < config.restarts; ++r) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    starts.push_back(v.normalized());
  }

  TauBoundResult best;
  best.c_star = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& q0 : starts) {
    if (q0.size() != n || !(q0.norm() > 0.0)) throw ValidationError("c* start has wrong dimension");
    Eigen::VectorXd x(n + 1);
    x.head(n) = q0.normalized();
    x(n) = program.min_cosine(q0);
    auto local = minimize_augmented_lagrangian(program, x, options);
    ++best.starts;
    best.iterations += local.iterations;
    const Eigen::VectorXd q = local.point.head(n).normalized();
    if (program.sign_violation(q) > config.feasibility_tol) continue;
    const double c = program.min_cosine(q);
    if (!found || c > best.c_star) {
      found = true;
      best.c_star = c;
      best.arg_q = q;
    }
  }
  if (!found) throw ValidationError("empty sign-feasible sphere region");
  best.c_star = std::clamp(best.c_star, 0.0, 1.0);
  best.tau_bar = tau_bar(best.c_star, n);
  for (const auto& m : moments) {
    best.angles.push_back(std::acos(std::clamp(m.normalized().dot(best.arg_q), -1.0, 1.0)));
  }
  return best;
}

}  // namespace proxyzoo
