#include "proxyzoo/var_reduced_form.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "proxyzoo/error.hpp"
#include "proxyzoo/log.hpp"

namespace proxyzoo {

void VarSpec::validate() const {
  if (lag_order < 1) throw ValidationError("lag order must be >= 1, got " + std::to_string(lag_order));
  if (horizon < 0) throw ValidationError("horizon must be >= 0, got " + std::to_string(horizon));
}

Eigen::Index ReducedForm::residual_row(const DateKey& date) const {
  for (std::size_t i = 0; i < residual_dates.size(); ++i) {
    if (residual_dates[i] == date) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

ReducedForm ReducedForm::with_moments(std::vector<Eigen::VectorXd> moments,
                                      std::vector<std::string> labels) const {
  if (moments.size() != labels.size()) throw ValidationError("proxy moments and labels disagree in count");
  ReducedForm out = *this;
  out.proxy_moments = std::move(moments);
  out.proxy_labels = std::move(labels);
  out.proxy_effective_obs.assign(out.proxy_moments.size(), static_cast<Eigen::Index>(residuals.rows()));
  return out;
}

OlsFit fit_var_ols(const Eigen::MatrixXd& y, int lag_order, bool include_constant) {
  if (lag_order < 1) throw ValidationError("lag order must be >= 1");
  const Eigen::Index T = y.rows();
  const Eigen::Index n = y.cols();
  const Eigen::Index p = lag_order;
  if (T - p <= n * p + 1) {
    throw ValidationError("sample too short: T - p = " + std::to_string(T - p) + " must exceed n*p + 1 = " +
                          std::to_string(n * p + 1));
  }
  const Eigen::Index rows = T - p;
  const Eigen::Index c = include_constant ? 1 : 0;
  Eigen::MatrixXd X(rows, c + n * p);
  if (include_constant) X.col(0).setOnes();
  for (Eigen::Index l = 1; l <= p; ++l) {
    X.middleCols(c + (l - 1) * n, n) = y.middleRows(p - l, rows);
  }
  const Eigen::MatrixXd Y = y.bottomRows(rows);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < X.cols()) throw NumericalError("collinear regressors");
  const Eigen::MatrixXd B = qr.solve(Y);

  OlsFit fit;
  fit.intercept = include_constant ? Eigen::VectorXd(B.row(0).transpose()) : Eigen::VectorXd::Zero(n);
  for (Eigen::Index l = 0; l < p; ++l) {
    fit.coefficients.emplace_back(B.middleRows(c + l * n, n).transpose());
  }
  fit.residuals = Y - X * B;
  return fit;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) throw ValidationError("covariance must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ValidationError("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  const double max_eig = eig.eigenvalues().maxCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success || !(min_eig > 1e-13 * std::max(max_eig, 0.0)) || max_eig <= 0.0) {
    std::ostringstream msg;
    msg << "covariance is not positive definite (smallest eigenvalue " << min_eig << ")";
    throw NumericalError(msg.str());
  }
  Eigen::MatrixXd L = llt.matrixL();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    if (L(i, i) < 0) L.col(i) = -L.col(i);
  }
  return L;
}

std::vector<Eigen::MatrixXd> reduced_irfs(std::span<const Eigen::MatrixXd> coefficients, int horizon) {
  if (horizon < 0) throw ValidationError("horizon must be >= 0");
  if (coefficients.empty()) throw ValidationError("need at least one coefficient matrix");
  const Eigen::Index n = coefficients.front().rows();
  std::vector<Eigen::MatrixXd> C;
  C.reserve(static_cast<std::size_t>(horizon) + 1);
  C.push_back(Eigen::MatrixXd::Identity(n, n));
  const int p = static_cast<int>(coefficients.size());
  for (int h = 1; h <= horizon; ++h) {
    Eigen::MatrixXd Ch = Eigen::MatrixXd::Zero(n, n);
    for (int l = 1; l <= std::min(h, p); ++l) {
      Ch.noalias() += C[static_cast<std::size_t>(h - l)] * coefficients[static_cast<std::size_t>(l - 1)];
    }
    C.push_back(std::move(Ch));
  }
  return C;
}

double companion_spectral_radius(std::span<const Eigen::MatrixXd> coefficients) {
  const Eigen::Index n = coefficients.front().rows();
  const Eigen::Index p = static_cast<Eigen::Index>(coefficients.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n * p, n * p);
  for (Eigen::Index l = 0; l < p; ++l) F.block(0, l * n, n, n) = coefficients[static_cast<std::size_t>(l)];
  if (p > 1) F.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(F, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ReducedForm estimate_var(const Panel& panel, const VarSpec& spec) {
  spec.validate();
  validate_panel(panel);
  OlsFit fit = fit_var_ols(panel.values, spec.lag_order, spec.include_constant);

  ReducedForm rf;
  rf.names = panel.names;
  rf.lag_order = spec.lag_order;
  rf.include_constant = spec.include_constant;
  rf.coefficients = std::move(fit.coefficients);
  rf.intercept = std::move(fit.intercept);
  rf.residuals = std::move(fit.residuals);
  rf.residual_dates.assign(panel.dates.begin() + spec.lag_order, panel.dates.end());
  const double denom = static_cast<double>(rf.residuals.rows());
  rf.sigma = rf.residuals.transpose() * rf.residuals / denom;
  rf.sigma = 0.5 * (rf.sigma + rf.sigma.transpose());
  rf.chol = cholesky_factor(rf.sigma);
  rf.irf = reduced_irfs(rf.coefficients, spec.horizon);
  rf.max_companion_modulus = companion_spectral_radius(rf.coefficients);
  rf.stable = rf.max_companion_modulus < 1.0;
  if (!rf.stable) {
    std::ostringstream msg;
    msg << "estimated VAR is not stable (companion spectral radius " << rf.max_companion_modulus << ")";
    log::warn(msg.str());
  }
  return rf;
}

ProxySeries residual_window(const ProxySeries& proxy, Eigen::Index offset) {
  if (offset < 0 || offset > proxy.size()) throw ValidationError("residual window offset out of range");
  ProxySeries out;
  out.label = proxy.label;
  out.policy = proxy.policy;
  out.demeaned = proxy.demeaned;
  const Eigen::Index len = proxy.size() - offset;
  out.values = proxy.values.tail(len);
  if (!proxy.dates.empty()) out.dates.assign(proxy.dates.begin() + offset, proxy.dates.end());
  out.observed.assign(proxy.observed.begin() + offset, proxy.observed.end());
  return out;
}

std::vector<Eigen::VectorXd> proxy_moments(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& chol,
                                           std::span<const ProxySeries> proxies, MissingPolicy policy,
                                           std::vector<Eigen::Index>* effective_obs) {
  const Eigen::Index rows = residuals.rows();
  // Orthogonalized residuals L^{-1} u_t stored as columns.
  const Eigen::MatrixXd W = chol.triangularView<Eigen::Lower>().solve(residuals.transpose());
  std::vector<Eigen::VectorXd> out;
  if (effective_obs) effective_obs->clear();
  for (const auto& proxy : proxies) {
    if (proxy.size() != rows || static_cast<Eigen::Index>(proxy.observed.size()) != rows) {
      throw ValidationError("proxy '" + proxy.label + "' is not aligned to the residual sample");
    }
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index t = 0; t < rows; ++t) {
      if (proxy.observed[static_cast<std::size_t>(t)]) {
        sum += proxy.values(t);
        ++count;
      }
    }
    if (count == 0) throw ValidationError("proxy '" + proxy.label + "': degenerate proxy (no observations)");
    const double mean = sum / static_cast<double>(count);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
      if (proxy.observed[static_cast<std::size_t>(t)]) m(t) = proxy.values(t) - mean;
    }
    if (m.cwiseAbs().maxCoeff() == 0.0) {
      throw ValidationError("proxy '" + proxy.label + "': degenerate proxy (identically zero after demeaning)");
    }
    const Eigen::Index t_eff = policy == MissingPolicy::zero ? rows : count;
    Eigen::VectorXd M = W * m / static_cast<double>(t_eff);
    if (!M.allFinite()) throw NumericalError("proxy '" + proxy.label + "': non-finite moment vector");
    out.push_back(std::move(M));
    if (effective_obs) effective_obs->push_back(t_eff);
  }
  return out;
}

ReducedForm assemble_reduced_form(const Panel& panel, std::span<const ProxySeries> proxies, const VarSpec& spec,
                                  MissingPolicy policy) {
  ReducedForm rf = estimate_var(panel, spec);
  std::vector<ProxySeries> windows;
  for (const auto& proxy : proxies) {
    if (proxy.size() != panel.periods()) {
      throw ValidationError("proxy '" + proxy.label + "' is not aligned to the panel");
    }
    windows.push_back(residual_window(proxy, spec.lag_order));
    rf.proxy_labels.push_back(proxy.label);
  }
  rf.proxy_moments = proxy_moments(rf.residuals, rf.chol, windows, policy, &rf.proxy_effective_obs);
  return rf;
}

}  // namespace proxyzoo
