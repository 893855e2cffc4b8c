#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "proxyzoo/diagnostics.hpp"
#include "proxyzoo/restrictions.hpp"
#include "proxyzoo/set_identification.hpp"
#include "proxyzoo/synthetic_dgp.hpp"
#include "proxyzoo/timeseries_io.hpp"
#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo::cli {

struct RunConfig {
  std::filesystem::path panel;
  std::string date_column;
  std::vector<std::filesystem::path> proxies;
  std::string missing_policy = "zero";
  VarSpec var;
  std::filesystem::path restrictions;
  std::vector<double> tau_grid;
  int grid_size = 25;
  double tau_cap = 10.0;
  SolverConfig solver;
  bool seed_explicit = false;  ///< --seed given; simulate then overrides the DGP file seed
  std::filesystem::path out = "proxyzoo-out";
  std::filesystem::path claims;
  std::filesystem::path dgp;
  std::vector<std::string> variables;
  double info_tau = 1.0;
  std::string benchmark_proxy;
  std::string normalize_variable;

  void validate() const;
};

/// Restriction file contents with names resolved against the panel.
struct RestrictionFile {
  SignRestrictionSpec spec;
  std::vector<double> tau_grid;
};

/// JSON: {"self_sign": bool, "irf": [{"variable", "shock", "horizons": [h0, h1], "sign"}],
/// "narrative": [{"shock", "date", "sign"}], "tau_grid": [...]}. Shocks are
/// 1-based; variables are names or 1-based indices.
RestrictionFile load_restrictions(const std::filesystem::path& path, const std::vector<std::string>& names);

/// JSON: {"claims": [{"name", "kind", "targets": [{"variable", "horizons", "sign", "threshold"}]}]}.
/// Horizons are a list or {"from": a, "to": b}.
std::vector<Claim> load_claims(const std::filesystem::path& path, const std::vector<std::string>& names);

/// JSON DGP description for the simulate command.
DgpSpec load_dgp_spec(const std::filesystem::path& path);

int resolve_variable(const std::string& token, const std::vector<std::string>& names);

/// {0} followed by `size` log-spaced points from cap / 100 to cap.
std::vector<double> default_tau_grid(double cap, int size);

/// 64-bit FNV-1a, hex encoded.
class Hasher {
 public:
  Hasher& add(std::string_view text);
  Hasher& add(double value);
  Hasher& add(std::int64_t value);
  Hasher& add_file(const std::filesystem::path& path);
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Hash of everything the reduced form depends on.
std::string estimate_hash(const RunConfig& config);
/// estimate_hash plus restrictions, solver settings and tau grid inputs.
std::string bounds_hash(const RunConfig& config);

}  // namespace proxyzoo::cli
