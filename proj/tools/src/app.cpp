#include <exception>
#include <ostream>

#include <CLI11.hpp>

#include "proxyzoo/error.hpp"
#include "proxyzoo/log.hpp"
#include "proxyzoo_cli/commands.hpp"

namespace proxyzoo::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Set-identified proxy-SVAR impulse responses under ranking restrictions"};
  app.name("proxyzoo");
  app.set_config("--config", "", "TOML/INI run configuration; flags override file values");
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> proxies;
  std::string panel;
  std::string restrictions;
  std::string out_dir = config.out.string();
  std::string claims;
  std::string dgp;
  bool no_constant = false;

  app.add_option("--panel", panel, "Observables CSV (date column + one column per variable)");
  app.add_option("--date-column", config.date_column, "Name of the date column (default: first column)");
  app.add_option("--proxy", proxies, "Proxy CSV (date column + one value column); repeatable");
  app.add_option("--missing", config.missing_policy, "Missing proxy values: zero | drop-report")
      ->capture_default_str();
  app.add_option("--lags", config.var.lag_order, "VAR lag order")->capture_default_str();
  app.add_flag("--no-constant", no_constant, "Estimate the VAR without an intercept");
  app.add_option("--horizon", config.var.horizon, "Largest impulse-response horizon H")->capture_default_str();
  app.add_option("--restrictions", restrictions, "Restriction file (JSON)");
  app.add_option("--tau", config.tau_grid, "Explicit tau grid (ascending); repeatable");
  app.add_option("--grid-size", config.grid_size, "Log-spaced tau points when no grid is given")
      ->capture_default_str();
  app.add_option("--tau-cap", config.tau_cap, "Grid cap used when tau_bar is infinite")->capture_default_str();
  app.add_option("--restarts", config.solver.restarts, "Random restarts per bound problem")->capture_default_str();
  app.add_option("--feasibility-tol", config.solver.feasibility_tol, "Constraint tolerance")->capture_default_str();
  app.add_option("--objective-tol", config.solver.objective_tol, "Objective tolerance")->capture_default_str();
  app.add_option("--max-iterations", config.solver.max_iterations, "Iteration cap per local solve")
      ->capture_default_str();
  auto* seed = app.add_option("--seed", config.solver.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", config.solver.jobs, "Worker threads (0: all hardware threads)")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--claims", claims, "Claims file (JSON) for breakdown");
  app.add_option("--dgp", dgp, "DGP description (JSON) for simulate");
  app.add_option("--variable", config.variables, "Restrict output to these variables; repeatable");
  app.add_option("--info-tau", config.info_tau, "tau used by info and lopo")->capture_default_str();
  app.add_option("--benchmark-proxy", config.benchmark_proxy, "Proxy label treated as valid for benchmark");
  app.add_option("--normalize", config.normalize_variable, "Variable with unit impact in benchmark");

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"estimate", "Estimate the reduced form and proxy moments", cmd_estimate},
      {"taubar", "Upper bound on proxy quality", cmd_taubar},
      {"bounds", "Identified-set bounds on a tau grid", cmd_bounds},
      {"breakdown", "Breakdown values for claims", cmd_breakdown},
      {"info", "Proxy-zoo information kappa", cmd_info},
      {"lopo", "Leave-one-proxy-out information", cmd_lopo},
      {"corrmap", "Pairwise proxy correlation map", cmd_corrmap},
      {"benchmark", "Point-identified responses against the bounds", cmd_benchmark},
      {"simulate", "Simulate a synthetic SVAR with proxies", cmd_simulate},
  };
  Command selected = nullptr;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&selected, fn = fn] { selected = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  config.panel = panel;
  config.restrictions = restrictions;
  config.out = out_dir;
  config.claims = claims;
  config.dgp = dgp;
  config.var.include_constant = !no_constant;
  config.seed_explicit = seed->count() > 0;
  for (const auto& p : proxies) config.proxies.emplace_back(p);

  log::set_sink([&err](std::string_view level, std::string_view message) {
    err << level << ": " << message << "\n";
  });
  try {
    config.validate();
    const int code = selected(config, out);
    log::set_sink({});
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  log::set_sink({});
  return kValidation;
}

}  // namespace proxyzoo::cli
