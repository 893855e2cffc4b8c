#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "proxyzoo/restrictions.hpp"
#include "proxyzoo/timeseries_io.hpp"
#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo {

/// Proxy m = sum_j c_j eps_j + noise with population correlations
/// corr(m, eps_j) = correlations[j]. The noise variance defaults to
/// 1 - |correlations|^2, which gives var(m) = 1.
struct ProxyPlan {
  std::string label;
  std::vector<double> correlations;
  std::optional<double> noise_variance;
};

/// min over j >= 2 with a nonzero loading of c_1 / |c_j|; infinity when the
/// proxy loads on the first shock only.
double plan_tau0(const ProxyPlan& plan);

struct DgpSpec {
  int n = 3;
  int p = 1;
  int T = 500;
  std::uint64_t seed = 1;
  std::vector<Eigen::MatrixXd> A;
  Eigen::MatrixXd B0;
  std::vector<ProxyPlan> proxies;
  int burn_in = 200;
  int truth_horizon = 24;

  void validate() const;
};

struct DgpTruth {
  Eigen::MatrixXd B0;  ///< columns signed so the diagonal is positive
  Eigen::MatrixXd L0;  ///< Cholesky factor of B0 B0'
  Eigen::MatrixXd O0;  ///< L0^{-1} B0
  std::vector<Eigen::MatrixXd> irf;       ///< C_h B0, h = 0..truth_horizon
  std::vector<double> tau0;               ///< per proxy
  Eigen::MatrixXd shocks;                 ///< T x n structural shocks aligned with the panel
  Eigen::VectorXd first_shock_response(int h) const { return irf[static_cast<std::size_t>(h)].col(0); }
};

struct Simulation {
  Panel panel;
  std::vector<ProxySeries> proxies;
  DgpTruth truth;
};

/// Gaussian SVAR(p) with burn-in; dates are the integers 1..T.
Simulation simulate(const DgpSpec& spec);

/// Accept/reject Haar draws on O(n) that satisfy the sign constraints.
/// Throws ValidationError("sign restrictions too tight for sampling") when
/// fewer than `count` draws are accepted within `max_draws` attempts.
std::vector<Eigen::MatrixXd> sample_admissible_rotations(const ReducedForm& rf,
                                                         const std::vector<LinearColumnConstraint>& sign,
                                                         int count, int max_draws, std::uint64_t seed);

enum class MedianBVariant { median, closest };

/// Element-wise median of L O over the draws.
Eigen::MatrixXd median_b(const std::vector<Eigen::MatrixXd>& draws, const ReducedForm& rf);

/// Index of the draw whose L O is nearest to median_b in Frobenius norm.
std::size_t closest_b_index(const std::vector<Eigen::MatrixXd>& draws, const ReducedForm& rf);

/// First structural shock series (B^{-1} u_t)_1 on the residual dates, using
/// the median B or the closest admissible draw. Needs at least 100 draws.
ProxySeries median_b_proxy(const std::vector<Eigen::MatrixXd>& draws, const ReducedForm& rf,
                           MedianBVariant variant = MedianBVariant::median, std::string label = "median_b");

}  // namespace proxyzoo
