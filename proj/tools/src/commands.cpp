#include "proxyzoo_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proxyzoo/csv.hpp"
#include "proxyzoo/error.hpp"
#include "proxyzoo/quality_bound.hpp"
#include "proxyzoo/serialization.hpp"

namespace proxyzoo::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

ordered_json number(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

void write_json(const fs::path& path, const ordered_json& doc) { csv::write_atomic(path, doc.dump(2) + "\n"); }

std::string cell(double value) { return csv::format_double(value); }

fs::path output_dir(const RunConfig& config) {
  fs::create_directories(config.out);
  return config.out;
}

ReducedForm load_checked_reduced_form(const RunConfig& config) {
  const fs::path path = config.out / "reduced_form.json";
  if (!fs::exists(path)) {
    throw ValidationError("missing " + path.string() + "; run `proxyzoo estimate` with the same configuration first");
  }
  std::string stored;
  ReducedForm rf = load_reduced_form(path, &stored);
  const std::string expected = estimate_hash(config);
  if (stored != expected) {
    throw ValidationError(path.string() + " was produced by a different configuration (hash " + stored +
                          ", expected " + expected + "); re-run `proxyzoo estimate`");
  }
  return rf;
}

struct Context {
  ReducedForm rf;
  RestrictionFile restrictions;
  std::vector<LinearColumnConstraint> sign;
  std::vector<int> variables;
  std::vector<int> horizons;
  std::string hash;
};

Context load_context(const RunConfig& config) {
  Context ctx;
  ctx.rf = load_checked_reduced_form(config);
  ctx.restrictions = load_restrictions(config.restrictions, ctx.rf.names);
  ctx.sign = compile_sign(ctx.restrictions.spec, ctx.rf);
  if (config.variables.empty()) {
    for (int i = 0; i < ctx.rf.dim(); ++i) ctx.variables.push_back(i);
  } else {
    for (const auto& v : config.variables) ctx.variables.push_back(resolve_variable(v, ctx.rf.names));
  }
  for (int h = 0; h <= ctx.rf.horizon(); ++h) ctx.horizons.push_back(h);
  ctx.hash = bounds_hash(config);
  return ctx;
}

std::vector<double> resolve_tau_grid(const RunConfig& config, const Context& ctx, std::ostream& log) {
  if (!config.tau_grid.empty()) return config.tau_grid;
  if (!ctx.restrictions.tau_grid.empty()) return ctx.restrictions.tau_grid;
  double cap = config.tau_cap;
  if (ctx.rf.proxies() > 0) {
    const auto bound = solve_cstar(ctx.rf.proxy_moments, ctx.sign, config.solver);
    if (std::isfinite(bound.tau_bar) && bound.tau_bar > 0.0) cap = bound.tau_bar;
  }
  log << "tau grid: 0 plus " << config.grid_size << " log-spaced points up to " << cap << "\n";
  return default_tau_grid(cap, config.grid_size);
}

std::string variable_name(const ReducedForm& rf, int i) {
  return i < static_cast<int>(rf.names.size()) ? rf.names[static_cast<std::size_t>(i)] : std::to_string(i + 1);
}

ordered_json stats_json(const SolverStats& s) {
  return {{"iterations", s.iterations},     {"starts", s.starts},
          {"max_violation", number(s.max_violation)}, {"empty_cells", s.empty_cells},
          {"flagged_cells", s.flagged_cells}, {"seconds", s.seconds}};
}

ordered_json info_json(const InfoReport& r, const ReducedForm& rf) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : r.kappa_cells) {
    cells.push_back({{"variable", variable_name(rf, c.variable)},
                     {"horizon", c.horizon},
                     {"kappa", number(c.kappa)},
                     {"width_full", number(c.width_full)},
                     {"width_sign", number(c.width_sign)},
                     {"full_empty", c.full_empty}});
  }
  return {{"tau", number(r.tau_used)},
          {"kappa", number(r.kappa_full)},
          {"excluded_cells", r.excluded_cells},
          {"empty_cells", r.empty_cells},
          {"cells", cells}};
}

}  // namespace

int cmd_estimate(const RunConfig& config, std::ostream& log) {
  const Panel panel = load_panel(config.panel, config.date_column);
  const MissingPolicy policy = parse_missing_policy(config.missing_policy);
  const auto proxies = load_proxies(config.proxies, panel, policy, config.date_column);
  const ReducedForm rf = assemble_reduced_form(panel, proxies, config.var, policy);
  const std::string hash = estimate_hash(config);
  write_json(output_dir(config) / "reduced_form.json", ordered_json::parse(reduced_form_to_json(rf, hash)));
  log << "config hash " << hash << "\n"
      << "estimated VAR(" << rf.lag_order << ") with n = " << rf.dim() << ", k = " << rf.proxies()
      << ", H = " << rf.horizon() << (rf.stable ? "" : " (unstable)") << "\n";
  return kSuccess;
}

int cmd_taubar(const RunConfig& config, std::ostream& log) {
  const Context ctx = load_context(config);
  if (ctx.rf.proxies() == 0) throw ValidationError("taubar needs at least one proxy");
  const auto result = solve_cstar(ctx.rf.proxy_moments, ctx.sign, config.solver);
  ordered_json angles = ordered_json::array();
  for (std::size_t l = 0; l < result.angles.size(); ++l) {
    angles.push_back({{"proxy", l < ctx.rf.proxy_labels.size() ? ctx.rf.proxy_labels[l] : std::to_string(l + 1)},
                      {"radians", result.angles[l]},
                      {"degrees", result.angles[l] * 180.0 / 3.14159265358979323846}});
  }
  const ordered_json doc = {{"config_hash", ctx.hash},
                            {"c_star", result.c_star},
                            {"tau_bar", number(result.tau_bar)},
                            {"arg_q", vector_json(result.arg_q)},
                            {"angles", angles},
                            {"oracle_gap", result.oracle_gap ? number(*result.oracle_gap) : ordered_json(nullptr)},
                            {"starts", result.starts},
                            {"iterations", result.iterations}};
  write_json(output_dir(config) / "taubar.json", doc);
  log << "config hash " << ctx.hash << "\nc* = " << result.c_star << ", tau_bar = "
      << (std::isinf(result.tau_bar) ? std::string("inf") : cell(result.tau_bar)) << "\n";
  return kSuccess;
}

int cmd_bounds(const RunConfig& config, std::ostream& log) {
  const Context ctx = load_context(config);
  const auto grid_taus = resolve_tau_grid(config, ctx, log);
  const auto grid = sweep(ctx.rf, ctx.sign, grid_taus, ctx.variables, ctx.horizons, config.solver);
  std::ostringstream table;
  table << "variable,horizon,tau,lower,upper,empty_flag,violation,local_optimum_flag\n";
  for (const auto& c : grid.cells) {
    table << csv::escape(variable_name(ctx.rf, c.variable)) << ',' << c.horizon << ',' << cell(c.tau) << ','
          << (c.empty ? "" : cell(c.lower)) << ',' << (c.empty ? "" : cell(c.upper)) << ',' << (c.empty ? 1 : 0)
          << ',' << cell(c.violation) << ',' << (c.local_optimum ? 1 : 0) << '\n';
  }
  const fs::path dir = output_dir(config);
  csv::write_atomic(dir / "bounds.csv", table.str());
  ordered_json taus = ordered_json::array();
  for (double t : grid.tau_grid) taus.push_back(number(t));
  write_json(dir / "bounds.json", {{"config_hash", ctx.hash},
                                   {"tau_grid", taus},
                                   {"cells", grid.cells.size()},
                                   {"solver_stats", stats_json(grid.stats)}});
  log << "config hash " << ctx.hash << "\n"
      << grid.cells.size() << " cells, " << grid.stats.empty_cells << " empty, " << grid.stats.flagged_cells
      << " flagged, " << grid.stats.seconds << " s\n";
  if (grid.all_empty()) {
    log << "identified set is empty at every requested tau\n";
    return kInfeasible;
  }
  return kSuccess;
}

int cmd_breakdown(const RunConfig& config, std::ostream& log) {
  const Context ctx = load_context(config);
  const auto claims = load_claims(config.claims, ctx.rf.names);
  const auto grid_taus = resolve_tau_grid(config, ctx, log);
  std::ostringstream table;
  table << "claim,kind,tau_star,vacuous_flag,monotonicity_flag\n";
  ordered_json results = ordered_json::array();
  for (const auto& claim : claims) {
    const auto r = breakdown_value(claim, ctx.rf, ctx.sign, grid_taus, config.solver);
    table << csv::escape(claim.name) << ',' << to_string(claim.kind) << ','
          << (r.tau_star ? cell(*r.tau_star) : std::string("NOT_SUPPORTED")) << ',' << (r.vacuous ? 1 : 0) << ','
          << (r.monotonicity_violation ? 1 : 0) << '\n';
    ordered_json evaluations = ordered_json::array();
    for (const auto& [tau, holds] : r.evaluations) evaluations.push_back({{"tau", number(tau)}, {"holds", holds}});
    results.push_back({{"claim", claim.name},
                       {"kind", to_string(claim.kind)},
                       {"tau_star", r.tau_star ? number(*r.tau_star) : ordered_json("NOT_SUPPORTED")},
                       {"vacuous", r.vacuous},
                       {"monotonicity_violation", r.monotonicity_violation},
                       {"evaluations", evaluations}});
    log << claim.name << ": " << (r.tau_star ? cell(*r.tau_star) : std::string("NOT_SUPPORTED")) << "\n";
  }
  const fs::path dir = output_dir(config);
  csv::write_atomic(dir / "breakdown.csv", table.str());
  write_json(dir / "breakdown.json", {{"config_hash", ctx.hash}, {"claims", results}});
  log << "config hash " << ctx.hash << "\n";
  return kSuccess;
}

int cmd_info(const RunConfig& config, std::ostream& log) {
  const Context ctx = load_context(config);
  const auto sign_only =
      sweep(ctx.rf.with_moments({}, {}), ctx.sign, {0.0}, ctx.variables, ctx.horizons, config.solver);
  const auto full = sweep(ctx.rf, ctx.sign, {config.info_tau}, ctx.variables, ctx.horizons, config.solver);
  const auto report = zoo_information(full, sign_only);
  std::ostringstream table;
  table << "variable,horizon,kappa,width_full,width_sign,full_empty\n";
  for (const auto& c : report.kappa_cells) {
    table << csv::escape(variable_name(ctx.rf, c.variable)) << ',' << c.horizon << ',' << cell(c.kappa) << ','
          << cell(c.width_full) << ',' << cell(c.width_sign) << ',' << (c.full_empty ? 1 : 0) << '\n';
  }
  const fs::path dir = output_dir(config);
  csv::write_atomic(dir / "info_cells.csv", table.str());
  ordered_json doc = info_json(report, ctx.rf);
  doc.erase("cells");
  ordered_json out = {{"config_hash", ctx.hash}};
  out.update(doc);
  write_json(dir / "info.json", out);
  log << "config hash " << ctx.hash << "\nkappa(tau = " << report.tau_used << ") = " << report.kappa_full << "\n";
  return kSuccess;
}

int cmd_lopo(const RunConfig& config, std::ostream& log) {
  const Context ctx = load_context(config);
  const auto report = lopo(ctx.rf, ctx.sign, config.info_tau, ctx.variables, ctx.horizons, config.solver);
  std::ostringstream table;
  table << "proxy,kappa_without,delta,negative_caveat\n";
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    table << csv::escape(e.label) << ',' << cell(e.kappa_without) << ',' << cell(e.delta) << ','
          << (e.negative_caveat ? 1 : 0) << '\n';
    entries.push_back({{"proxy", e.label},
                       {"kappa_without", number(e.kappa_without)},
                       {"delta", number(e.delta)},
                       {"negative_caveat", e.negative_caveat}});
  }
  const fs::path dir = output_dir(config);
  csv::write_atomic(dir / "lopo.csv", table.str());
  write_json(dir / "lopo.json", {{"config_hash", ctx.hash},
                                 {"tau", number(config.info_tau)},
                                 {"kappa_full", number(report.full.kappa_full)},
                                 {"entries", entries}});
  log << "config hash " << ctx.hash << "\nkappa(full) = " << report.full.kappa_full << "\n";
  return kSuccess;
}

int cmd_corrmap(const RunConfig& config, std::ostream& log) {
  if (config.proxies.size() < 1) throw ValidationError("corrmap needs at least one --proxy");
  std::vector<ProxySeries> series;
  for (const auto& p : config.proxies) series.push_back(read_proxy(p, config.date_column));
  const auto map = correlation_map(series, series);
  const std::string hash = estimate_hash(config);
  std::ostringstream table;
  table << "proxy_a,proxy_b,corr,p_value,bucket,overlap\n";
  ordered_json corr = ordered_json::array();
  ordered_json pval = ordered_json::array();
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    ordered_json crow = ordered_json::array();
    ordered_json prow = ordered_json::array();
    for (std::size_t j = 0; j < map.cells[i].size(); ++j) {
      const auto& c = map.cells[i][j];
      table << csv::escape(map.row_labels[i]) << ',' << csv::escape(map.col_labels[j]) << ','
            << (c.available ? cell(c.corr) : "") << ',' << (c.available ? cell(c.p_value) : "") << ','
            << significance_bucket(c) << ',' << c.overlap << '\n';
      crow.push_back(c.available ? number(c.corr) : ordered_json(nullptr));
      prow.push_back(c.available ? number(c.p_value) : ordered_json(nullptr));
    }
    corr.push_back(crow);
    pval.push_back(prow);
  }
  const fs::path dir = output_dir(config);
  csv::write_atomic(dir / "corrmap.csv", table.str());
  write_json(dir / "corrmap.json",
             {{"config_hash", hash}, {"labels", map.row_labels}, {"corr", corr}, {"p_value", pval}});
  log << "config hash " << hash << "\n" << map.cells.size() << " x " << map.cells.size() << " correlation map\n";
  return kSuccess;
}

int cmd_benchmark(const RunConfig& config, std::ostream& log) {
  const Context ctx = load_context(config);
  if (ctx.rf.proxies() == 0) throw ValidationError("benchmark needs at least one proxy");
  int proxy = 0;
  if (!config.benchmark_proxy.empty()) {
    proxy = -1;
    for (int l = 0; l < ctx.rf.proxies(); ++l)
      if (ctx.rf.proxy_labels[static_cast<std::size_t>(l)] == config.benchmark_proxy) proxy = l;
    if (proxy < 0) throw ValidationError("unknown proxy '" + config.benchmark_proxy + "'");
  }
  const int norm_var = config.normalize_variable.empty() ? 0 : resolve_variable(config.normalize_variable, ctx.rf.names);
  const auto point = point_identified_irf(ctx.rf, proxy, -1);
  const double scale = 1.0 / point.front()(norm_var);
  const auto grid_taus = resolve_tau_grid(config, ctx, log);
  const auto grid = sweep(ctx.rf, ctx.sign, grid_taus, ctx.variables, ctx.horizons, config.solver);
  std::ostringstream table;
  table << "variable,horizon,tau,point,lower,upper,inside_flag\n";
  for (const auto& c : grid.cells) {
    const double pt = scale * point[static_cast<std::size_t>(c.horizon)](c.variable);
    double lo = scale * c.lower;
    double hi = scale * c.upper;
    if (scale < 0) std::swap(lo, hi);
    const bool inside = !c.empty && pt >= lo - 1e-9 && pt <= hi + 1e-9;
    table << csv::escape(variable_name(ctx.rf, c.variable)) << ',' << c.horizon << ',' << cell(c.tau) << ','
          << cell(pt) << ',' << (c.empty ? "" : cell(lo)) << ',' << (c.empty ? "" : cell(hi)) << ','
          << (inside ? 1 : 0) << '\n';
  }
  const fs::path dir = output_dir(config);
  csv::write_atomic(dir / "benchmark.csv", table.str());
  write_json(dir / "benchmark.json", {{"config_hash", ctx.hash},
                                      {"proxy", ctx.rf.proxy_labels[static_cast<std::size_t>(proxy)]},
                                      {"normalize_variable", variable_name(ctx.rf, norm_var)},
                                      {"scale", number(scale)},
                                      {"solver_stats", stats_json(grid.stats)}});
  log << "config hash " << ctx.hash << "\nbenchmark against proxy "
      << ctx.rf.proxy_labels[static_cast<std::size_t>(proxy)] << ", unit impact on "
      << variable_name(ctx.rf, norm_var) << "\n";
  return kSuccess;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  DgpSpec spec = load_dgp_spec(config.dgp);
  if (config.seed_explicit) spec.seed = config.solver.seed;
  const auto sim = simulate(spec);
  const fs::path dir = output_dir(config);
  write_panel(sim.panel, dir / "panel.csv");
  ordered_json proxies = ordered_json::array();
  for (std::size_t l = 0; l < sim.proxies.size(); ++l) {
    const auto& p = sim.proxies[l];
    write_proxy(p, dir / (p.label + ".csv"));
    proxies.push_back({{"label", p.label},
                       {"file", p.label + ".csv"},
                       {"correlations", spec.proxies[l].correlations},
                       {"tau0", number(sim.truth.tau0[l])}});
  }
  ordered_json irf = ordered_json::array();
  for (std::size_t h = 0; h < sim.truth.irf.size(); ++h) irf.push_back(vector_json(sim.truth.irf[h].col(0)));
  const std::string hash = Hasher().add("simulate").add_file(config.dgp).add(static_cast<std::int64_t>(spec.seed)).hex();
  write_json(dir / "truth.json", {{"config_hash", hash},
                                  {"seed", spec.seed},
                                  {"B0", matrix_json(sim.truth.B0)},
                                  {"O0", matrix_json(sim.truth.O0)},
                                  {"first_shock_irf", irf},
                                  {"proxies", proxies}});
  log << "config hash " << hash << "\nsimulated T = " << spec.T << ", n = " << spec.n << ", k = "
      << sim.proxies.size() << " into " << dir.string() << "\n";
  return kSuccess;
}

}  // namespace proxyzoo::cli
