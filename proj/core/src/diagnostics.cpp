#include "proxyzoo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "proxyzoo/error.hpp"

namespace proxyzoo {

ClaimKind parse_claim_kind(std::string_view text) {
  if (text == "sign_positive") return ClaimKind::sign_positive;
  if (text == "sign_negative") return ClaimKind::sign_negative;
  if (text == "joint_sign") return ClaimKind::joint_sign;
  if (text == "magnitude") return ClaimKind::magnitude;
  throw ValidationError("unknown claim kind '" + std::string(text) + "'");
}

std::string_view to_string(ClaimKind kind) {
  switch (kind) {
    case ClaimKind::sign_positive: return "sign_positive";
    case ClaimKind::sign_negative: return "sign_negative";
    case ClaimKind::joint_sign: return "joint_sign";
    case ClaimKind::magnitude: return "magnitude";
  }
  return "unknown";
}

void Claim::validate(int n, int horizon) const {
  if (targets.empty()) throw ValidationError("claim '" + name + "' has no targets");
  for (const auto& t : targets) {
    if (t.variable < 0 || t.variable >= n) throw ValidationError("claim variable out of range");
    if (t.horizons.empty()) throw ValidationError("claim target without horizons");
    for (int h : t.horizons)
      if (h < 0 || h > horizon) throw ValidationError("claim horizon outside [0, H]");
    if (!std::isfinite(t.threshold)) throw ValidationError("claim threshold must be finite");
    if (kind != ClaimKind::magnitude && t.threshold != 0.0) {
      throw ValidationError("sign claims use a zero threshold");
    }
    if (kind == ClaimKind::sign_positive && t.direction != SignDirection::nonnegative) {
      throw ValidationError("sign_positive claim with a negative target");
    }
    if (kind == ClaimKind::sign_negative && t.direction != SignDirection::nonpositive) {
      throw ValidationError("sign_negative claim with a positive target");
    }
  }
}

std::vector<int> Claim::variables() const {
  std::set<int> s;
  for (const auto& t : targets) s.insert(t.variable);
  return {s.begin(), s.end()};
}

std::vector<int> Claim::horizons() const {
  std::set<int> s;
  for (const auto& t : targets) s.insert(t.horizons.begin(), t.horizons.end());
  return {s.begin(), s.end()};
}

ClaimCheck evaluate_claim(const Claim& claim, const IdentifiedSetGrid& grid, std::size_t tau_index) {
  ClaimCheck check{true, false};
  for (const auto& t : claim.targets) {
    for (int h : t.horizons) {
      const BoundCell& cell = grid.find(tau_index, t.variable, h);
      if (cell.empty) {
        check.vacuous = true;
        continue;
      }
      const bool ok = t.direction == SignDirection::nonnegative ? cell.lower >= t.threshold
                                                                 : cell.upper <= t.threshold;
      if (!ok) check.holds = false;
    }
  }
  return check;
}

BreakdownResult breakdown_value(const Claim& claim, const ReducedForm& rf,
                                const std::vector<LinearColumnConstraint>& sign, const std::vector<double>& tau_grid,
                                const SolverConfig& config, const BreakdownOptions& options) {
  claim.validate(rf.dim(), rf.horizon());
  if (tau_grid.empty()) throw ValidationError("tau grid is empty");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1])) throw ValidationError("tau grid must be strictly ascending");
  const auto variables = claim.variables();
  const auto horizons = claim.horizons();
  BreakdownResult result;
  auto holds_at = [&](double tau) {
    const auto grid = sweep(rf, sign, {tau}, variables, horizons, config);
    const auto check = evaluate_claim(claim, grid, 0);
    result.vacuous = result.vacuous || check.vacuous;
    result.evaluations.emplace_back(tau, check.holds);
    return check.holds;
  };

  std::size_t g = 0;
  for (; g < tau_grid.size(); ++g) {
    if (holds_at(tau_grid[g])) break;
  }
  if (g == tau_grid.size()) return result;
  if (g + 1 < tau_grid.size() && !holds_at(tau_grid.back())) result.monotonicity_violation = true;
  double hi = tau_grid[g];
  if (g > 0 && options.refine && std::isfinite(hi)) {
    double lo = tau_grid[g - 1];
    while (hi - lo > options.resolution) {
      const double mid = 0.5 * (lo + hi);
      if (holds_at(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }
  result.tau_star = hi;
  return result;
}

InfoReport zoo_information(const IdentifiedSetGrid& full, const IdentifiedSetGrid& sign_only, std::size_t tau_index) {
  if (tau_index >= full.tau_grid.size() || sign_only.tau_grid.empty()) {
    throw ValidationError("zoo_information: tau index out of range");
  }
  InfoReport report;
  report.tau_used = full.tau_grid[tau_index];
  double sum = 0.0;
  for (std::size_t v = 0; v < full.variables.size(); ++v) {
    for (std::size_t h = 0; h < full.horizons.size(); ++h) {
      const BoundCell& f = full.cell(tau_index, v, h);
      const BoundCell& s = sign_only.find(0, f.variable, f.horizon);
      KappaCell k{f.variable, f.horizon, 0.0, f.width(), s.width(), f.empty};
      if (s.empty || !(s.width() > 1e-12)) {
        ++report.excluded_cells;
        continue;
      }
      if (f.empty) ++report.empty_cells;
      k.kappa = 1.0 - k.width_full / k.width_sign;
      sum += k.kappa;
      report.kappa_cells.push_back(k);
    }
  }
  if (report.kappa_cells.empty()) throw NumericalError("degenerate baseline");
  report.kappa_full = sum / static_cast<double>(report.kappa_cells.size());
  return report;
}

LopoReport lopo(const ReducedForm& rf, const std::vector<LinearColumnConstraint>& sign, double tau,
                const std::vector<int>& variables, const std::vector<int>& horizons, const SolverConfig& config) {
  const int k = rf.proxies();
  if (k < 2) throw ValidationError("leave-one-proxy-out needs at least two proxies");
  const auto sign_only = sweep(rf.with_moments({}, {}), sign, {0.0}, variables, horizons, config);
  LopoReport report;
  report.full = zoo_information(sweep(rf, sign, {tau}, variables, horizons, config), sign_only);
  for (int l = 0; l < k; ++l) {
    std::vector<Eigen::VectorXd> moments;
    std::vector<std::string> labels;
    for (int j = 0; j < k; ++j) {
      if (j == l) continue;
      moments.push_back(rf.proxy_moments[static_cast<std::size_t>(j)]);
      labels.push_back(j < static_cast<int>(rf.proxy_labels.size()) ? rf.proxy_labels[static_cast<std::size_t>(j)]
                                                                    : "proxy" + std::to_string(j + 1));
    }
    const auto without = zoo_information(
        sweep(rf.with_moments(std::move(moments), std::move(labels)), sign, {tau}, variables, horizons, config),
        sign_only);
    LopoEntry e;
    e.label = l < static_cast<int>(rf.proxy_labels.size()) ? rf.proxy_labels[static_cast<std::size_t>(l)]
                                                            : "proxy" + std::to_string(l + 1);
    e.kappa_without = without.kappa_full;
    e.delta = report.full.kappa_full - without.kappa_full;
    e.negative_caveat = e.delta < 0.0;
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::string significance_bucket(const CorrelationCell& cell) {
  if (!cell.available) return "NA";
  if (cell.p_value <= 0.01) return "p<=0.01";
  if (cell.p_value <= 0.05) return "p<=0.05";
  if (cell.p_value <= 0.10) return "p<=0.10";
  return "n.s.";
}

namespace {

CorrelationCell correlate(const ProxySeries& a, const ProxySeries& b, Eigen::Index min_overlap) {
  std::map<DateKey, double> lookup;
  for (Eigen::Index t = 0; t < b.size(); ++t) {
    if (b.observed[static_cast<std::size_t>(t)] && std::isfinite(b.values(t))) lookup.emplace(b.dates[t], b.values(t));
  }
  std::vector<double> x;
  std::vector<double> y;
  for (Eigen::Index t = 0; t < a.size(); ++t) {
    if (!a.observed[static_cast<std::size_t>(t)] || !std::isfinite(a.values(t))) continue;
    if (auto it = lookup.find(a.dates[static_cast<std::size_t>(t)]); it != lookup.end()) {
      x.push_back(a.values(t));
      y.push_back(it->second);
    }
  }
  CorrelationCell cell;
  cell.overlap = static_cast<Eigen::Index>(x.size());
  if (cell.overlap < std::max<Eigen::Index>(min_overlap, 3)) return cell;
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), cell.overlap);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), cell.overlap);
  const Eigen::VectorXd xc = xv.array() - xv.mean();
  const Eigen::VectorXd yc = yv.array() - yv.mean();
  const double denom = xc.norm() * yc.norm();
  if (!(denom > 0.0)) return cell;
  cell.available = true;
  cell.corr = std::clamp(xc.dot(yc) / denom, -1.0, 1.0);
  const double dof = static_cast<double>(cell.overlap - 2);
  if (1.0 - cell.corr * cell.corr <= 0.0) {
    cell.p_value = 0.0;
  } else {
    const double t = std::abs(cell.corr) * std::sqrt(dof / (1.0 - cell.corr * cell.corr));
    const boost::math::students_t dist(dof);
    cell.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
  }
  return cell;
}

}  // namespace

CorrelationMap correlation_map(const std::vector<ProxySeries>& a, const std::vector<ProxySeries>& b,
                               Eigen::Index min_overlap) {
  CorrelationMap map;
  for (const auto& s : a) map.row_labels.push_back(s.label);
  for (const auto& s : b) map.col_labels.push_back(s.label);
  map.cells.assign(a.size(), std::vector<CorrelationCell>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) map.cells[i][j] = correlate(a[i], b[j], min_overlap);
  return map;
}

std::vector<Eigen::VectorXd> point_identified_irf(const ReducedForm& rf, int proxy, int normalize_variable) {
  if (proxy < 0 || proxy >= rf.proxies()) throw ValidationError("proxy index out of range");
  if (normalize_variable >= rf.dim()) throw ValidationError("normalization variable out of range");
  const Eigen::VectorXd q = rf.proxy_moments[static_cast<std::size_t>(proxy)].normalized();
  double scale = 1.0;
  if (normalize_variable >= 0) {
    const double impact = (rf.chol * q)(normalize_variable);
    if (!(std::abs(impact) > 0.0)) throw NumericalError("impact response used for normalization is zero");
    scale = 1.0 / impact;
  }
  std::vector<Eigen::VectorXd> out;
  for (const auto& c : rf.irf) out.push_back(scale * (c * rf.chol * q));
  return out;
}

}  // namespace proxyzoo
