#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "proxyzoo/timeseries_io.hpp"

namespace proxyzoo {

struct VarSpec {
  int lag_order = 1;
  bool include_constant = true;
  int horizon = 0;

  void validate() const;
};

/// Everything consistently estimable from the data: VAR coefficients,
/// residual covariance and its Cholesky factor, reduced-form impulse
/// responses and the proxy moment vectors.
struct ReducedForm {
  std::vector<std::string> names;
  int lag_order = 0;
  bool include_constant = true;
  std::vector<Eigen::MatrixXd> coefficients;  ///< A_1..A_p, each n x n
  Eigen::VectorXd intercept;                  ///< zero when no constant
  Eigen::MatrixXd residuals;                  ///< (T - p) x n
  std::vector<DateKey> residual_dates;        ///< dates of the residual rows
  Eigen::MatrixXd sigma;                      ///< residual covariance, divisor T - p
  Eigen::MatrixXd chol;                       ///< lower Cholesky factor, positive diagonal
  std::vector<Eigen::MatrixXd> irf;           ///< C_0..C_H
  std::vector<Eigen::VectorXd> proxy_moments; ///< M_1..M_k
  std::vector<std::string> proxy_labels;
  std::vector<Eigen::Index> proxy_effective_obs;
  bool stable = true;
  double max_companion_modulus = 0.0;

  int dim() const { return static_cast<int>(sigma.rows()); }
  int horizon() const { return static_cast<int>(irf.size()) - 1; }
  int proxies() const { return static_cast<int>(proxy_moments.size()); }

  /// Row index into `residuals` for a calendar date, or -1.
  Eigen::Index residual_row(const DateKey& date) const;

  /// Copy with the proxy zoo replaced (used for leave-one-out and synthetic zoos).
  ReducedForm with_moments(std::vector<Eigen::VectorXd> moments, std::vector<std::string> labels) const;
};

/// Least-squares fit of y_t on a constant and p lags; no covariance step.
struct OlsFit {
  std::vector<Eigen::MatrixXd> coefficients;
  Eigen::VectorXd intercept;
  Eigen::MatrixXd residuals;
};

/// Works for any n >= 1. Throws ValidationError when T - p <= n p + 1 and
/// NumericalError("collinear regressors") for a rank-deficient design.
OlsFit fit_var_ols(const Eigen::MatrixXd& y, int lag_order, bool include_constant);

/// OLS estimation of the reduced-form VAR. Throws ValidationError when the
/// sample is too short, NumericalError("collinear regressors") for a
/// rank-deficient design and NumericalError when Sigma is not positive definite.
/// An unstable companion matrix only produces a warning.
ReducedForm estimate_var(const Panel& panel, const VarSpec& spec);

/// Lower-triangular L with positive diagonal and L L' = sigma. The error for a
/// non-PD input reports the smallest eigenvalue.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma);

/// C_0 = I, C_h = sum_{l=1}^{min(h,p)} C_{h-l} A_l.
std::vector<Eigen::MatrixXd> reduced_irfs(std::span<const Eigen::MatrixXd> coefficients, int horizon);

/// Sample analogue of E[L^{-1} u_t m_t]. Each proxy must have one entry per
/// residual row. Observed proxy entries are demeaned within the residual
/// sample; missing entries count as zeros under MissingPolicy::zero (divisor
/// T - p) and are skipped under drop_report (divisor = observed count).
std::vector<Eigen::VectorXd> proxy_moments(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& chol,
                                           std::span<const ProxySeries> proxies, MissingPolicy policy,
                                           std::vector<Eigen::Index>* effective_obs = nullptr);

/// Proxy restricted to the residual sample (drops the first `offset` entries).
ProxySeries residual_window(const ProxySeries& proxy, Eigen::Index offset);

/// estimate_var followed by proxy_moments on the aligned proxies.
ReducedForm assemble_reduced_form(const Panel& panel, std::span<const ProxySeries> proxies,
                                  const VarSpec& spec, MissingPolicy policy);

/// Companion-form largest eigenvalue modulus.
double companion_spectral_radius(std::span<const Eigen::MatrixXd> coefficients);

}  // namespace proxyzoo
