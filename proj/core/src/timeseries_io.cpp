#include "proxyzoo/timeseries_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

#include "proxyzoo/csv.hpp"
#include "proxyzoo/error.hpp"

namespace proxyzoo {
namespace {

std::int64_t to_int(const std::string& s) { return std::stoll(s); }

std::size_t date_column_index(const csv::Table& table, std::string_view date_column,
                              const std::filesystem::path& path) {
  if (date_column.empty()) return 0;
  auto idx = table.column(date_column);
  if (!idx) {
    throw ValidationError(path.string() + ": date column '" + std::string(date_column) + "' not found");
  }
  return *idx;
}

}  // namespace

DateKey DateKey::parse(std::string_view text) {
  static const std::regex integer_re(R"(^-?\d+$)");
  static const std::regex daily_re(R"(^(\d{4})[-/](\d{1,2})[-/](\d{1,2})$)");
  static const std::regex monthly_re(R"(^(\d{4})(?:-|M|m)(\d{1,2})$)");
  static const std::regex quarterly_re(R"(^(\d{4})[-:]?[Qq]([1-4])$)");

  DateKey key;
  key.text_ = std::string(text);
  std::smatch m;
  const std::string s = key.text_;
  if (std::regex_match(s, m, integer_re)) {
    key.kind_ = Kind::integer;
    key.key_ = {to_int(m[0]), 0, 0};
  } else if (std::regex_match(s, m, daily_re)) {
    key.kind_ = Kind::daily;
    key.key_ = {to_int(m[1]), to_int(m[2]), to_int(m[3])};
    if (key.key_[1] < 1 || key.key_[1] > 12 || key.key_[2] < 1 || key.key_[2] > 31) {
      throw ValidationError("unparseable date: '" + s + "'");
    }
  } else if (std::regex_match(s, m, monthly_re)) {
    key.kind_ = Kind::monthly;
    key.key_ = {to_int(m[1]), to_int(m[2]), 0};
    if (key.key_[1] < 1 || key.key_[1] > 12) throw ValidationError("unparseable date: '" + s + "'");
  } else if (std::regex_match(s, m, quarterly_re)) {
    key.kind_ = Kind::quarterly;
    key.key_ = {to_int(m[1]), to_int(m[2]), 0};
  } else {
    throw ValidationError("unparseable date: '" + s + "'");
  }
  return key;
}

MissingPolicy parse_missing_policy(std::string_view text) {
  if (text == "zero") return MissingPolicy::zero;
  if (text == "drop-report" || text == "drop_report") return MissingPolicy::drop_report;
  throw ValidationError("unknown missing policy '" + std::string(text) + "' (expected zero|drop-report)");
}

std::string_view to_string(MissingPolicy policy) {
  return policy == MissingPolicy::zero ? "zero" : "drop-report";
}

Eigen::Index ProxySeries::observed_count() const {
  return static_cast<Eigen::Index>(std::count(observed.begin(), observed.end(), true));
}

void validate_panel(const Panel& panel) {
  if (panel.values.cols() < 2) throw ValidationError("panel needs at least 2 variables");
  if (static_cast<Eigen::Index>(panel.dates.size()) != panel.values.rows()) {
    throw ValidationError("panel dates and values disagree in length");
  }
  if (static_cast<Eigen::Index>(panel.names.size()) != panel.values.cols()) {
    throw ValidationError("panel names and values disagree in width");
  }
  for (std::size_t t = 1; t < panel.dates.size(); ++t) {
    if (!(panel.dates[t - 1] < panel.dates[t])) {
      throw ValidationError("panel dates not strictly increasing at '" + panel.dates[t].text() + "'");
    }
  }
  if (!panel.values.allFinite()) throw ValidationError("missing observable in panel");
}

Panel load_panel(const std::filesystem::path& path, std::string_view date_column) {
  const csv::Table table = csv::read(path);
  const std::size_t date_idx = date_column_index(table, date_column, path);
  if (table.header.size() < 3) {
    throw ValidationError(path.string() + ": panel needs a date column and at least 2 observables");
  }
  std::vector<std::size_t> value_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != date_idx) value_cols.push_back(c);
  }

  const auto rows = table.rows.size();
  std::vector<DateKey> dates(rows);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(value_cols.size()));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    try {
      dates[r] = DateKey::parse(row[date_idx]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (r > 0 && dates[r].kind() != dates[0].kind()) {
      throw ValidationError(where + ": date format differs from the first row");
    }
    for (std::size_t j = 0; j < value_cols.size(); ++j) {
      const auto& cell = row[value_cols[j]];
      if (csv::is_missing_marker(cell)) {
        throw ValidationError(where + ": missing observable in column '" + table.header[value_cols[j]] + "'");
      }
      double v = 0.0;
      try {
        v = csv::parse_double(cell);
      } catch (const ValidationError& e) {
        throw ValidationError(where + ", column '" + table.header[value_cols[j]] + "': " + e.what());
      }
      if (!std::isfinite(v)) {
        throw ValidationError(where + ": missing observable in column '" + table.header[value_cols[j]] + "'");
      }
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
  }

  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dates[a] < dates[b]; });

  Panel panel;
  panel.values.resize(values.rows(), values.cols());
  panel.dates.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    panel.dates.push_back(dates[order[r]]);
    panel.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(order[r]));
  }
  for (auto c : value_cols) panel.names.push_back(table.header[c]);
  for (std::size_t t = 1; t < panel.dates.size(); ++t) {
    if (panel.dates[t - 1] == panel.dates[t]) {
      throw ValidationError(path.string() + ": duplicate date '" + panel.dates[t].text() + "'");
    }
  }
  validate_panel(panel);
  return panel;
}

void write_panel(const Panel& panel, const std::filesystem::path& path, std::string_view date_column) {
  std::ostringstream out;
  out << csv::escape(date_column);
  for (const auto& name : panel.names) out << ',' << csv::escape(name);
  out << '\n';
  for (Eigen::Index t = 0; t < panel.values.rows(); ++t) {
    out << csv::escape(panel.dates[static_cast<std::size_t>(t)].text());
    for (Eigen::Index j = 0; j < panel.values.cols(); ++j) out << ',' << csv::format_double(panel.values(t, j));
    out << '\n';
  }
  csv::write_atomic(path, out.str());
}

ProxySeries read_proxy(const std::filesystem::path& path, std::string_view date_column) {
  const csv::Table table = csv::read(path);
  if (table.header.size() != 2) {
    throw ValidationError(path.string() + ": proxy file needs exactly a date column and one value column");
  }
  const std::size_t date_idx = date_column_index(table, date_column, path);
  const std::size_t value_idx = 1 - date_idx;

  ProxySeries proxy;
  proxy.label = table.header[value_idx];
  const auto rows = table.rows.size();
  proxy.values.resize(static_cast<Eigen::Index>(rows));
  proxy.observed.assign(rows, false);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    try {
      proxy.dates.push_back(DateKey::parse(row[date_idx]));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (csv::is_missing_marker(row[value_idx])) {
      proxy.values(static_cast<Eigen::Index>(r)) = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double v = csv::parse_double(row[value_idx]);
      proxy.values(static_cast<Eigen::Index>(r)) = v;
      proxy.observed[r] = std::isfinite(v);
    }
  }
  proxy.policy = MissingPolicy::drop_report;
  return proxy;
}

void write_proxy(const ProxySeries& proxy, const std::filesystem::path& path, std::string_view date_column) {
  std::ostringstream out;
  out << csv::escape(date_column) << ',' << csv::escape(proxy.label) << '\n';
  for (Eigen::Index t = 0; t < proxy.values.size(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    out << csv::escape(proxy.dates[i].text()) << ',';
    if (proxy.observed[i]) out << csv::format_double(proxy.values(t));
    out << '\n';
  }
  csv::write_atomic(path, out.str());
}

ProxySeries align_proxy(const ProxySeries& proxy, const Panel& panel, MissingPolicy policy,
                        Eigen::Index min_overlap) {
  if (proxy.demeaned && proxy.policy == policy && proxy.dates == panel.dates) return proxy;

  std::map<DateKey, std::size_t> slot;
  for (std::size_t i = 0; i < proxy.dates.size(); ++i) {
    if (!slot.emplace(proxy.dates[i], i).second) {
      throw ValidationError("proxy '" + proxy.label + "': duplicate date '" + proxy.dates[i].text() + "'");
    }
  }

  const auto T = static_cast<Eigen::Index>(panel.dates.size());
  ProxySeries out;
  out.label = proxy.label;
  out.dates = panel.dates;
  out.values = Eigen::VectorXd::Constant(T, std::numeric_limits<double>::quiet_NaN());
  out.observed.assign(static_cast<std::size_t>(T), false);
  out.policy = policy;

  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto it = slot.find(panel.dates[static_cast<std::size_t>(t)]);
    if (it == slot.end() || !proxy.observed[it->second]) continue;
    const double v = proxy.values(static_cast<Eigen::Index>(it->second));
    out.values(t) = v;
    out.observed[static_cast<std::size_t>(t)] = true;
    sum += v;
    ++count;
  }
  if (count < min_overlap) {
    throw ValidationError("proxy '" + proxy.label + "': insufficient overlap (" + std::to_string(count) +
                          " observed dates inside the panel, need " + std::to_string(min_overlap) + ")");
  }
  const double mean = sum / static_cast<double>(count);
  for (Eigen::Index t = 0; t < T; ++t) {
    if (out.observed[static_cast<std::size_t>(t)]) {
      out.values(t) -= mean;
    } else if (policy == MissingPolicy::zero) {
      out.values(t) = 0.0;
    }
  }
  out.demeaned = true;
  return out;
}

std::vector<ProxySeries> load_proxies(const std::vector<std::filesystem::path>& paths, const Panel& panel,
                                      MissingPolicy policy, std::string_view date_column) {
  std::vector<ProxySeries> out;
  out.reserve(paths.size());
  for (const auto& path : paths) {
    ProxySeries raw = read_proxy(path, date_column);
    if (!raw.dates.empty() && !panel.dates.empty() && raw.dates.front().kind() != panel.dates.front().kind()) {
      throw ValidationError("proxy '" + raw.label + "' (" + path.string() +
                            "): date format differs from the panel");
    }
    out.push_back(align_proxy(raw, panel, policy));
  }
  return out;
}

}  // namespace proxyzoo
