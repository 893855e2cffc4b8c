#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "proxyzoo/error.hpp"
#include "proxyzoo_cli/commands.hpp"
#include "proxyzoo_cli/config.hpp"

namespace fs = std::filesystem;
using namespace proxyzoo::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("proxyzoo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write(dir_ / "dgp.json", R"({
      "n": 3, "p": 1, "T": 400, "seed": 5,
      "A": [[[0.5, 0.1, 0.0], [-0.1, 0.4, 0.1], [0.1, 0.0, 0.3]]],
      "B0": [[1.0, 0.2, -0.1], [0.5, 1.0, 0.1], [-0.3, 0.4, 0.8]],
      "proxies": [{"label": "m1", "correlations": [0.6, 0.2, 0.0]},
                  {"label": "m2", "correlations": [0.5, 0.0, -0.15]}]
    })");
  }
  void TearDown() override { fs::remove_all(dir_); }

  static void write(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
  }
  static std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "proxyzoo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::vector<std::string> data_args(const fs::path& out) {
    return {"--panel", (dir_ / "sim" / "panel.csv").string(), "--proxy", (dir_ / "sim" / "m1.csv").string(),
            "--proxy", (dir_ / "sim" / "m2.csv").string(), "--lags", "1", "--horizon", "4", "--out", out.string()};
  }

  int stage(const std::string& command, const fs::path& out, std::vector<std::string> extra = {}) {
    auto args = data_args(out);
    args.insert(args.begin(), command);
    args.insert(args.end(), extra.begin(), extra.end());
    return invoke(args);
  }

  void simulate() {
    ASSERT_EQ(invoke({"simulate", "--dgp", (dir_ / "dgp.json").string(), "--out", (dir_ / "sim").string()}), 0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST(CliConfig, DefaultTauGridAndVariables) {
  const auto grid = default_tau_grid(10.0, 5);
  ASSERT_EQ(grid.size(), 6u);
  EXPECT_EQ(grid[0], 0.0);
  EXPECT_NEAR(grid[1], 0.1, 1e-12);
  EXPECT_NEAR(grid[5], 10.0, 1e-12);
  EXPECT_EQ(resolve_variable("gdp", {"ffr", "gdp"}), 1);
  EXPECT_EQ(resolve_variable("1", {"ffr", "gdp"}), 0);
  EXPECT_THROW(resolve_variable("cpi", {"ffr", "gdp"}), proxyzoo::ValidationError);
  EXPECT_NE(Hasher().add("a").hex(), Hasher().add("b").hex());
}

TEST_F(CliTest, FullPipeline) {
  simulate();
  const fs::path out = dir_ / "run";
  write(dir_ / "restrictions.json", R"({"self_sign": true, "tau_grid": [0, 1, 2]})");
  write(dir_ / "claims.json", R"({"claims": [{"name": "y2 up", "kind": "sign_positive",
      "targets": [{"variable": 2, "horizons": [0], "sign": ">=0"}]}]})");
  const std::vector<std::string> solver = {"--restrictions", (dir_ / "restrictions.json").string(), "--restarts", "6",
                                           "--jobs", "1"};
  ASSERT_EQ(stage("estimate", out), 0) << err_.str();
  EXPECT_NE(out_.str().find("config hash"), std::string::npos);
  ASSERT_EQ(stage("taubar", out, solver), 0) << err_.str();
  ASSERT_EQ(stage("bounds", out, solver), 0) << err_.str();
  auto claims = solver;
  claims.insert(claims.end(), {"--claims", (dir_ / "claims.json").string()});
  ASSERT_EQ(stage("breakdown", out, claims), 0) << err_.str();
  ASSERT_EQ(stage("info", out, solver), 0) << err_.str();
  ASSERT_EQ(stage("lopo", out, solver), 0) << err_.str();
  ASSERT_EQ(stage("corrmap", out), 0) << err_.str();
  auto bench = solver;
  bench.insert(bench.end(), {"--benchmark-proxy", "m1"});
  ASSERT_EQ(stage("benchmark", out, bench), 0) << err_.str();

  for (const char* f : {"reduced_form.json", "taubar.json", "bounds.csv", "bounds.json", "breakdown.csv",
                        "info.json", "lopo.csv", "corrmap.csv", "benchmark.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  std::ifstream bounds(out / "bounds.csv");
  std::string header;
  std::getline(bounds, header);
  EXPECT_EQ(header, "variable,horizon,tau,lower,upper,empty_flag,violation,local_optimum_flag");
  int rows = 0;
  for (std::string line; std::getline(bounds, line);) rows += !line.empty();
  EXPECT_EQ(rows, 3 * 3 * 5);
  const auto taubar = nlohmann::json::parse(slurp(out / "taubar.json"));
  EXPECT_GT(taubar.at("c_star").get<double>(), 0.5);
}

TEST_F(CliTest, EstimateIsByteDeterministic) {
  simulate();
  ASSERT_EQ(stage("estimate", dir_ / "a"), 0) << err_.str();
  ASSERT_EQ(stage("estimate", dir_ / "b"), 0) << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "reduced_form.json"), slurp(dir_ / "b" / "reduced_form.json"));
}

TEST_F(CliTest, ExitCodes) {
  simulate();
  const fs::path out = dir_ / "run";
  EXPECT_EQ(stage("bounds", out), 2);
  EXPECT_NE(err_.str().find("proxyzoo estimate"), std::string::npos);
  EXPECT_EQ(invoke({"estimate", "--panel", (dir_ / "sim" / "panel.csv").string(), "--lags", "0", "--out", out.string()}),
            2);
  EXPECT_EQ(invoke({"nonsense"}), 2);
  ASSERT_EQ(stage("estimate", out), 0) << err_.str();
  auto other_lags = data_args(out);
  other_lags[std::find(other_lags.begin(), other_lags.end(), "--lags") - other_lags.begin() + 1] = "2";
  other_lags.insert(other_lags.begin(), "bounds");
  EXPECT_EQ(invoke(other_lags), 2);
  EXPECT_NE(err_.str().find("different configuration"), std::string::npos) << err_.str();

  write(dir_ / "contradiction.json", R"({"irf": [
      {"variable": 1, "shock": 1, "horizon": 0, "sign": "<=0"},
      {"variable": 2, "shock": 1, "horizon": 0, "sign": "<=0"},
      {"variable": 3, "shock": 1, "horizon": 0, "sign": "<=0"},
      {"variable": 2, "shock": 1, "horizon": 0, "sign": ">=0"},
      {"variable": 3, "shock": 1, "horizon": 0, "sign": ">=0"}]})");
  EXPECT_EQ(stage("bounds", out,
                  {"--restrictions", (dir_ / "contradiction.json").string(), "--tau", "0", "--restarts", "4",
                   "--jobs", "1"}),
            3)
      << err_.str();
}

TEST_F(CliTest, SimulateHonoursExplicitSeed) {
  ASSERT_EQ(invoke({"simulate", "--dgp", (dir_ / "dgp.json").string(), "--out", (dir_ / "s1").string()}), 0);
  ASSERT_EQ(invoke({"simulate", "--dgp", (dir_ / "dgp.json").string(), "--out", (dir_ / "s2").string(), "--seed",
                    "5"}),
            0);
  ASSERT_EQ(invoke({"simulate", "--dgp", (dir_ / "dgp.json").string(), "--out", (dir_ / "s3").string(), "--seed",
                    "6"}),
            0);
  EXPECT_EQ(slurp(dir_ / "s1" / "panel.csv"), slurp(dir_ / "s2" / "panel.csv"));
  EXPECT_NE(slurp(dir_ / "s1" / "panel.csv"), slurp(dir_ / "s3" / "panel.csv"));
}

TEST_F(CliTest, ConfigFileMatchesFlags) {
  simulate();
  write(dir_ / "run.toml", "panel = \"" + (dir_ / "sim" / "panel.csv").string() + "\"\nproxy = [\"" +
                               (dir_ / "sim" / "m1.csv").string() + "\", \"" + (dir_ / "sim" / "m2.csv").string() +
                               "\"]\nlags = 1\nhorizon = 4\nout = \"" + (dir_ / "from_file").string() + "\"\n");
  ASSERT_EQ(invoke({"estimate", "--config", (dir_ / "run.toml").string()}), 0) << err_.str();
  ASSERT_EQ(stage("estimate", dir_ / "from_flags"), 0) << err_.str();
  EXPECT_EQ(slurp(dir_ / "from_file" / "reduced_form.json"), slurp(dir_ / "from_flags" / "reduced_form.json"));
}
