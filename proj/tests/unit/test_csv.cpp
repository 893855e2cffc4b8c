#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "proxyzoo/csv.hpp"
#include "proxyzoo/error.hpp"

namespace csv = proxyzoo::csv;

TEST(Csv, ParsesHeaderRowsAndQuotes) {
  const auto t = csv::parse("date,a,\"b,c\"\n1, 2.5 ,\"x \"\"y\"\"\"\n\n2,3,4\n");
  ASSERT_EQ(t.header.size(), 3u);
  EXPECT_EQ(t.header[2], "b,c");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "2.5");
  EXPECT_EQ(t.rows[0][2], "x \"y\"");
  EXPECT_EQ(t.line_numbers[1], 4u);
  EXPECT_EQ(t.column("a"), 1u);
  EXPECT_FALSE(t.column("zz").has_value());
}

TEST(Csv, RejectsRaggedRows) { EXPECT_THROW(csv::parse("a,b\n1,2,3\n"), proxyzoo::ValidationError); }

TEST(Csv, MissingMarkers) {
  for (const char* s : {"", " ", "NaN", "nan", "NA", "na", " NA "}) EXPECT_TRUE(csv::is_missing_marker(s)) << s;
  for (const char* s : {"0", "N", "-", "none"}) EXPECT_FALSE(csv::is_missing_marker(s)) << s;
}

TEST(Csv, StrictNumberParsing) {
  EXPECT_DOUBLE_EQ(csv::parse_double("1.25e-3"), 1.25e-3);
  EXPECT_DOUBLE_EQ(csv::parse_double(" -4 "), -4.0);
  EXPECT_THROW(csv::parse_double("1,5"), proxyzoo::ValidationError);
  EXPECT_THROW(csv::parse_double("12abc"), proxyzoo::ValidationError);
}

TEST(Csv, FormatRoundTripsRandomDoubles) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(csv::parse_double(csv::format_double(x)), x);
  }
  EXPECT_EQ(csv::format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Csv, AtomicWriteReplacesFile) {
  const auto path = std::filesystem::temp_directory_path() / "proxyzoo_csv_atomic.txt";
  csv::write_atomic(path, "first");
  csv::write_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "second");
  std::filesystem::remove(path);
}
