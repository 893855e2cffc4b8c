#include "proxyzoo/synthetic_dgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>

#include "proxyzoo/error.hpp"
#include "proxyzoo/rotation.hpp"

namespace proxyzoo {

double plan_tau0(const ProxyPlan& plan) {
  if (plan.correlations.empty()) throw ValidationError("proxy plan without correlations");
  double tau0 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < plan.correlations.size(); ++j) {
    if (plan.correlations[j] != 0.0) tau0 = std::min(tau0, plan.correlations[0] / std::abs(plan.correlations[j]));
  }
  return tau0;
}

void DgpSpec::validate() const {
  if (n < 1) throw ValidationError("DGP needs n >= 1");
  if (p < 1 || static_cast<int>(A.size()) != p) throw ValidationError("DGP needs p coefficient matrices");
  for (const auto& a : A)
    if (a.rows() != n || a.cols() != n) throw ValidationError("DGP coefficient matrix has the wrong shape");
  if (B0.rows() != n || B0.cols() != n) throw ValidationError("B0 has the wrong shape");
  if (std::abs(B0.determinant()) < 1e-12) throw ValidationError("B0 is not invertible");
  if (T < 2 || burn_in < 0 || truth_horizon < 0) throw ValidationError("DGP sample settings are invalid");
  if (companion_spectral_radius(A) >= 1.0) throw ValidationError("DGP companion matrix is not stable");
  for (const auto& plan : proxies) {
    if (static_cast<int>(plan.correlations.size()) != n) throw ValidationError("proxy plan needs n correlations");
    double ss = 0.0;
    for (double c : plan.correlations) ss += c * c;
    if (!(ss < 1.0)) throw ValidationError("proxy plan correlations must have norm < 1");
    if (plan.noise_variance && !(*plan.noise_variance > 0.0)) throw ValidationError("noise variance must be positive");
  }
}

Simulation simulate(const DgpSpec& spec) {
  spec.validate();
  const int n = spec.n;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;

  DgpTruth truth;
  truth.B0 = spec.B0;
  for (int j = 0; j < n; ++j)
    if (truth.B0(j, j) < 0) truth.B0.col(j) *= -1.0;
  truth.L0 = cholesky_factor(truth.B0 * truth.B0.transpose());
  truth.O0 = truth.L0.triangularView<Eigen::Lower>().solve(truth.B0);
  for (const auto& c : reduced_irfs(spec.A, spec.truth_horizon)) truth.irf.push_back(c * truth.B0);
  for (const auto& plan : spec.proxies) truth.tau0.push_back(plan_tau0(plan));

  const int total = spec.T + spec.burn_in;
  Eigen::MatrixXd eps(total, n);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total, n);
  for (int t = 0; t < total; ++t) {
    for (int j = 0; j < n; ++j) eps(t, j) = normal(rng);
    Eigen::VectorXd yt = truth.B0 * eps.row(t).transpose();
    for (int l = 1; l <= spec.p && t - l >= 0; ++l) yt += spec.A[static_cast<std::size_t>(l - 1)] * y.row(t - l).transpose();
    y.row(t) = yt.transpose();
  }

  Simulation sim;
  sim.panel.values = y.bottomRows(spec.T);
  for (int t = 0; t < spec.T; ++t) sim.panel.dates.push_back(DateKey::parse(std::to_string(t + 1)));
  for (int j = 0; j < n; ++j) sim.panel.names.push_back("y" + std::to_string(j + 1));
  truth.shocks = eps.bottomRows(spec.T);

  for (std::size_t l = 0; l < spec.proxies.size(); ++l) {
    const auto& plan = spec.proxies[l];
    double ss = 0.0;
    for (double c : plan.correlations) ss += c * c;
    const double noise_var = plan.noise_variance.value_or(1.0 - ss);
    const double scale = std::sqrt(noise_var / (1.0 - ss));
    ProxySeries proxy;
    proxy.label = plan.label.empty() ? "proxy" + std::to_string(l + 1) : plan.label;
    proxy.dates = sim.panel.dates;
    proxy.values.resize(spec.T);
    proxy.observed.assign(static_cast<std::size_t>(spec.T), true);
    for (int t = 0; t < spec.T; ++t) {
      double m = std::sqrt(noise_var) * normal(rng);
      for (int j = 0; j < n; ++j) m += scale * plan.correlations[static_cast<std::size_t>(j)] * truth.shocks(t, j);
      proxy.values(t) = m;
    }
    sim.proxies.push_back(std::move(proxy));
  }
  sim.truth = std::move(truth);
  return sim;
}

std::vector<Eigen::MatrixXd> sample_admissible_rotations(const ReducedForm& rf,
                                                         const std::vector<LinearColumnConstraint>& sign,
                                                         int count, int max_draws, std::uint64_t seed) {
  const int n = rf.dim();
  std::vector<LinearConstraint> constraints;
  for (const auto& s : sign) constraints.push_back(to_linear(s, n));
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<Eigen::MatrixXd> accepted;
  for (int d = 0; d < max_draws && static_cast<int>(accepted.size()) < count; ++d) {
    Eigen::MatrixXd o = random_rotation(n, rng).matrix;
    if (coin(rng)) o.col(n - 1) *= -1.0;
    if (check_feasibility(o, constraints, 0.0).feasible) accepted.push_back(std::move(o));
  }
  if (static_cast<int>(accepted.size()) < count) throw ValidationError("sign restrictions too tight for sampling");
  return accepted;
}

Eigen::MatrixXd median_b(const std::vector<Eigen::MatrixXd>& draws, const ReducedForm& rf) {
  if (draws.empty()) throw ValidationError("median_b needs draws");
  const Eigen::Index n = rf.dim();
  Eigen::MatrixXd med(n, n);
  std::vector<double> values(draws.size());
  std::vector<Eigen::MatrixXd> bs;
  bs.reserve(draws.size());
  for (const auto& o : draws) bs.push_back(rf.chol * o);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::size_t d = 0; d < bs.size(); ++d) values[d] = bs[d](i, j);
      std::sort(values.begin(), values.end());
      const std::size_t mid = values.size() / 2;
      med(i, j) = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    }
  }
  return med;
}

std::size_t closest_b_index(const std::vector<Eigen::MatrixXd>& draws, const ReducedForm& rf) {
  const Eigen::MatrixXd med = median_b(draws, rf);
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const double dist = (rf.chol * draws[d] - med).norm();
    if (dist < best_distance) {
      best_distance = dist;
      best = d;
    }
  }
  return best;
}

ProxySeries median_b_proxy(const std::vector<Eigen::MatrixXd>& draws, const ReducedForm& rf, MedianBVariant variant,
                           std::string label) {
  if (draws.size() < 100) throw ValidationError("sign restrictions too tight for sampling");
  const Eigen::MatrixXd b =
      variant == MedianBVariant::median ? median_b(draws, rf) : Eigen::MatrixXd(rf.chol * draws[closest_b_index(draws, rf)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  if (!lu.isInvertible()) throw NumericalError("median B is singular");
  const Eigen::MatrixXd shocks = lu.solve(rf.residuals.transpose());
  ProxySeries proxy;
  proxy.label = std::move(label);
  proxy.dates = rf.residual_dates;
  proxy.values = shocks.row(0).transpose();
  proxy.observed.assign(static_cast<std::size_t>(proxy.values.size()), true);
  return proxy;
}

}  // namespace proxyzoo
