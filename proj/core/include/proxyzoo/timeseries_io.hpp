#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace proxyzoo {

/// Calendar label used as an opaque ordered key. Accepted spellings:
/// integers ("17"), "YYYY-MM-DD" / "YYYY/MM/DD", "YYYY-MM", "YYYYMmm",
/// "YYYYQn" / "YYYY-Qn" / "YYYY:Qn". Only ordering and equality are used;
/// there is no frequency arithmetic.
class DateKey {
 public:
  enum class Kind { integer, daily, monthly, quarterly };

  DateKey() = default;
  static DateKey parse(std::string_view text);

  const std::string& text() const { return text_; }
  Kind kind() const { return kind_; }

  friend bool operator==(const DateKey& a, const DateKey& b) {
    return a.kind_ == b.kind_ && a.key_ == b.key_;
  }
  friend std::strong_ordering operator<=>(const DateKey& a, const DateKey& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.key_ <=> b.key_;
  }

 private:
  std::string text_;
  Kind kind_ = Kind::integer;
  std::array<std::int64_t, 3> key_{};
};

/// T x n block of observables indexed by strictly increasing dates.
struct Panel {
  std::vector<DateKey> dates;
  Eigen::MatrixXd values;
  std::vector<std::string> names;

  Eigen::Index periods() const { return values.rows(); }
  Eigen::Index variables() const { return values.cols(); }
};

enum class MissingPolicy {
  zero,         ///< demean observed entries, then fill missing with 0
  drop_report,  ///< keep missing entries flagged; moment estimators skip them
};

MissingPolicy parse_missing_policy(std::string_view text);
std::string_view to_string(MissingPolicy policy);

/// A proxy (external instrument) series. After alignment `dates` equals the
/// panel's dates; `observed[t]` records whether the source had a value.
/// Missing slots hold 0 under MissingPolicy::zero and NaN under drop_report.
struct ProxySeries {
  std::string label;
  std::vector<DateKey> dates;
  Eigen::VectorXd values;
  std::vector<bool> observed;
  MissingPolicy policy = MissingPolicy::zero;
  /// Set by align_proxy once observed entries have been demeaned.
  bool demeaned = false;

  Eigen::Index size() const { return values.size(); }
  Eigen::Index observed_count() const;
};

/// Checks the Panel invariants (sorted unique dates, finite values, n >= 2).
void validate_panel(const Panel& panel);

/// Loads a panel. An empty `date_column` selects the first column.
Panel load_panel(const std::filesystem::path& path, std::string_view date_column = {});

/// Writes a panel with the date column first. Values are written with
/// round-trip precision, so load_panel(write_panel(p)) reproduces p bit-exactly.
void write_panel(const Panel& panel, const std::filesystem::path& path,
                 std::string_view date_column = "date");

/// Reads a raw proxy file (date column + exactly one value column). Missing
/// markers become NaN with observed = false. No alignment is performed.
ProxySeries read_proxy(const std::filesystem::path& path, std::string_view date_column = {});

/// Writes a proxy as a two-column file; missing entries are written empty.
void write_proxy(const ProxySeries& proxy, const std::filesystem::path& path,
                 std::string_view date_column = "date");

/// Aligns a proxy to the panel dates and applies the missing-value policy
/// (observed entries demeaned). Aligning an already aligned series is a no-op.
/// Throws ValidationError("insufficient overlap") with fewer than
/// `min_overlap` observed dates inside the panel.
ProxySeries align_proxy(const ProxySeries& proxy, const Panel& panel, MissingPolicy policy,
                        Eigen::Index min_overlap = 10);

/// read_proxy + align_proxy for each path.
std::vector<ProxySeries> load_proxies(const std::vector<std::filesystem::path>& paths,
                                      const Panel& panel, MissingPolicy policy,
                                      std::string_view date_column = {});

}  // namespace proxyzoo
