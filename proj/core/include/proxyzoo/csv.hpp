#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proxyzoo::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line number in the source file for each row (header is line 1).
  std::vector<std::size_t> line_numbers;

  /// Index of a header column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// Reads a delimited text file with a header row. Blank lines are skipped,
/// fields may be double-quoted. Rows with a field count that differs from the
/// header are rejected.
Table read(const std::filesystem::path& path, char delimiter = ',');
Table parse(std::string_view text, std::string_view source_name = "<memory>", char delimiter = ',');

/// Empty cell, NaN, NA (any case, surrounding blanks ignored).
bool is_missing_marker(std::string_view cell);

/// Strict decimal parse with `.` as decimal point. Throws ValidationError.
double parse_double(std::string_view cell);

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

/// Quotes a field when it contains the delimiter, a quote or a newline.
std::string escape(std::string_view field, char delimiter = ',');

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace proxyzoo::csv
