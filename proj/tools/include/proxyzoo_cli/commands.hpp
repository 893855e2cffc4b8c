#pragma once

#include <iosfwd>

#include "proxyzoo_cli/config.hpp"

namespace proxyzoo::cli {

enum ExitCode : int { kSuccess = 0, kValidation = 2, kInfeasible = 3 };

int cmd_estimate(const RunConfig& config, std::ostream& log);
int cmd_taubar(const RunConfig& config, std::ostream& log);
int cmd_bounds(const RunConfig& config, std::ostream& log);
int cmd_breakdown(const RunConfig& config, std::ostream& log);
int cmd_info(const RunConfig& config, std::ostream& log);
int cmd_lopo(const RunConfig& config, std::ostream& log);
int cmd_corrmap(const RunConfig& config, std::ostream& log);
int cmd_benchmark(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);

/// Parses arguments, dispatches the subcommand and maps exceptions to exit
/// codes (ValidationError -> 2).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace proxyzoo::cli
