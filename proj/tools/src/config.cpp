#include "proxyzoo_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proxyzoo/csv.hpp"
#include "proxyzoo/error.hpp"

namespace proxyzoo::cli {

using nlohmann::json;

void RunConfig::validate() const {
  var.validate();
  solver.validate();
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] >= 0.0)) throw ValidationError("tau grid values must be non-negative");
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) throw ValidationError("tau grid must be strictly ascending");
  }
  if (grid_size < 1) throw ValidationError("grid size must be positive");
  if (!(tau_cap > 0.0) || !std::isfinite(tau_cap)) throw ValidationError("tau cap must be positive and finite");
  if (!(info_tau >= 0.0)) throw ValidationError("info tau must be non-negative");
  parse_missing_policy(missing_policy);
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<int> horizon_list(const json& node) {
  std::vector<int> out;
  if (node.is_number_integer()) return {node.get<int>()};
  if (node.is_object()) {
    const int from = node.at("from").get<int>();
    const int to = node.at("to").get<int>();
    if (to < from) throw ValidationError("horizon range is reversed");
    for (int h = from; h <= to; ++h) out.push_back(h);
    return out;
  }
  if (node.is_array()) {
    for (const auto& h : node) out.push_back(h.get<int>());
    return out;
  }
  throw ValidationError("horizons must be an integer, a list or {from, to}");
}

std::string json_text(const json& node) { return node.is_string() ? node.get<std::string>() : node.dump(); }

}  // namespace

int resolve_variable(const std::string& token, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == token) return static_cast<int>(i);
  int index = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
  if (ec == std::errc() && ptr == token.data() + token.size() && index >= 1 &&
      index <= static_cast<int>(names.size())) {
    return index - 1;
  }
  throw ValidationError("unknown variable '" + token + "'");
}

RestrictionFile load_restrictions(const std::filesystem::path& path, const std::vector<std::string>& names) {
  RestrictionFile file;
  if (path.empty()) return file;
  const json doc = read_json(path);
  try {
    file.spec.self_sign = doc.value("self_sign", true);
    const int n = static_cast<int>(names.size());
    for (const auto& e : doc.value("irf", json::array())) {
      const int variable = resolve_variable(json_text(e.at("variable")), names);
      const int shock = e.value("shock", 1) - 1;
      if (shock < 0 || shock >= n) throw ValidationError("restriction shock index out of range");
      const auto direction = parse_sign_direction(e.at("sign").get<std::string>());
      std::vector<int> hs;
      if (e.contains("horizons")) {
        const auto& node = e.at("horizons");
        if (node.is_array() && node.size() == 2) {
          for (int h = node[0].get<int>(); h <= node[1].get<int>(); ++h) hs.push_back(h);
        } else {
          hs = horizon_list(node);
        }
      } else {
        hs.push_back(e.value("horizon", 0));
      }
      for (int h : hs) file.spec.irf_entries.push_back({variable, shock, h, direction});
    }
    for (const auto& e : doc.value("narrative", json::array())) {
      const int shock = e.value("shock", 1) - 1;
      if (shock < 0 || shock >= n) throw ValidationError("narrative shock index out of range");
      file.spec.narrative_entries.push_back(
          {shock, DateKey::parse(json_text(e.at("date"))), parse_sign_direction(e.at("sign").get<std::string>())});
    }
    for (const auto& t : doc.value("tau_grid", json::array())) {
      file.tau_grid.push_back(t.is_string() && t.get<std::string>() == "inf" ? INFINITY : t.get<double>());
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return file;
}

std::vector<Claim> load_claims(const std::filesystem::path& path, const std::vector<std::string>& names) {
  if (path.empty()) throw ValidationError("breakdown needs --claims");
  const json doc = read_json(path);
  std::vector<Claim> claims;
  try {
    for (const auto& c : doc.at("claims")) {
      Claim claim;
      claim.name = c.value("name", "claim" + std::to_string(claims.size() + 1));
      claim.kind = parse_claim_kind(c.at("kind").get<std::string>());
      for (const auto& t : c.at("targets")) {
        ClaimTarget target;
        target.variable = resolve_variable(json_text(t.at("variable")), names);
        target.horizons = horizon_list(t.at("horizons"));
        target.threshold = t.value("threshold", 0.0);
        if (t.contains("sign")) {
          target.direction = parse_sign_direction(t.at("sign").get<std::string>());
        } else {
          target.direction =
              claim.kind == ClaimKind::sign_negative ? SignDirection::nonpositive : SignDirection::nonnegative;
        }
        claim.targets.push_back(std::move(target));
      }
      claims.push_back(std::move(claim));
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return claims;
}

DgpSpec load_dgp_spec(const std::filesystem::path& path) {
  if (path.empty()) throw ValidationError("simulate needs --dgp");
  const json doc = read_json(path);
  auto matrix = [](const json& rows, int n) {
    Eigen::MatrixXd m(n, n);
    if (rows.size() != static_cast<std::size_t>(n)) throw ValidationError("matrix must have n rows");
    for (int i = 0; i < n; ++i) {
      if (rows[i].size() != static_cast<std::size_t>(n)) throw ValidationError("matrix must have n columns");
      for (int j = 0; j < n; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
  };
  DgpSpec spec;
  try {
    spec.n = doc.at("n").get<int>();
    spec.p = doc.value("p", 1);
    spec.T = doc.at("T").get<int>();
    spec.seed = doc.value("seed", std::uint64_t{1});
    spec.burn_in = doc.value("burn_in", 200);
    spec.truth_horizon = doc.value("truth_horizon", 24);
    for (const auto& a : doc.at("A")) spec.A.push_back(matrix(a, spec.n));
    spec.B0 = matrix(doc.at("B0"), spec.n);
    for (const auto& p : doc.value("proxies", json::array())) {
      ProxyPlan plan;
      plan.label = p.value("label", "proxy" + std::to_string(spec.proxies.size() + 1));
      plan.correlations = p.at("correlations").get<std::vector<double>>();
      if (p.contains("noise_variance")) plan.noise_variance = p.at("noise_variance").get<double>();
      spec.proxies.push_back(std::move(plan));
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

std::vector<double> default_tau_grid(double cap, int size) {
  if (!(cap > 0.0) || !std::isfinite(cap)) throw ValidationError("tau cap must be positive and finite");
  std::vector<double> grid{0.0};
  const double lo = std::log(cap / 100.0);
  const double hi = std::log(cap);
  for (int i = 0; i < size; ++i) {
    const double x = size == 1 ? hi : lo + (hi - lo) * i / (size - 1);
    grid.push_back(i == size - 1 ? cap : std::exp(x));
  }
  return grid;
}

Hasher& Hasher::add(std::string_view text) {
  for (unsigned char ch : text) {
    state_ ^= ch;
    state_ *= 0x100000001b3ULL;
  }
  state_ ^= 0xff;
  state_ *= 0x100000001b3ULL;
  return *this;
}

Hasher& Hasher::add(double value) { return add(csv::format_double(value)); }

Hasher& Hasher::add(std::int64_t value) { return add(std::to_string(value)); }

Hasher& Hasher::add_file(const std::filesystem::path& path) {
  if (path.empty()) return add("<none>");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return add(buffer.str());
}

std::string Hasher::hex() const {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(state_));
  return buffer;
}

std::string estimate_hash(const RunConfig& config) {
  Hasher h;
  h.add("estimate").add_file(config.panel).add(config.date_column);
  for (const auto& p : config.proxies) h.add_file(p);
  h.add(config.missing_policy)
      .add(std::int64_t{config.var.lag_order})
      .add(std::int64_t{config.var.include_constant})
      .add(std::int64_t{config.var.horizon});
  return h.hex();
}

std::string bounds_hash(const RunConfig& config) {
  Hasher h;
  h.add(estimate_hash(config)).add_file(config.restrictions);
  for (double t : config.tau_grid) h.add(t);
  h.add(std::int64_t{config.grid_size})
      .add(config.tau_cap)
      .add(std::int64_t{config.solver.restarts})
      .add(config.solver.feasibility_tol)
      .add(config.solver.objective_tol)
      .add(std::int64_t{config.solver.max_iterations})
      .add(static_cast<std::int64_t>(config.solver.seed));
  for (const auto& v : config.variables) h.add(v);
  return h.hex();
}

}  // namespace proxyzoo::cli
