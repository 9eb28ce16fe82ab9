#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cli.hpp"
#include "sflab/acceptance.hpp"
#include "sflab/grid_io.hpp"

using namespace sflab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "sflab");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SFLAB_TEST_DIR) + "/data/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST(CliClassify, ParabolicI1) {
  const CliRun r = run({"classify", "1", "1", "0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["type"], "I_1");
  EXPECT_EQ(j["order"], "inf");
  EXPECT_EQ(j["bad_cycles"], 1);
  EXPECT_EQ(j["euler_number"], 1);
}

TEST(CliClassify, Identity) {
  const CliRun r = run({"classify", "1", "0", "0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["type"], "I_0");
  EXPECT_EQ(j["bad_cycles"], 2);
}

TEST(CliClassify, NegativeEntries) {
  const CliRun r = run({"classify", "0", "1", "-1", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["type"], "II");
  EXPECT_EQ(j["order"], 6);
  EXPECT_EQ(j["bad_cycles"], 0);
  EXPECT_FALSE(j.contains("euler_number"));
}

TEST(CliClassify, ErrorsExitTwo) {
  EXPECT_EQ(run({"classify", "1", "1", "1", "1"}).code, cli::kInputError);
  EXPECT_EQ(run({"classify", "2", "1", "1", "1"}).code, cli::kInputError);
  EXPECT_EQ(run({"classify", "1", "1"}).code, cli::kInputError);
  EXPECT_EQ(run({"classify", "1", "x", "0", "1"}).code, cli::kInputError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
}

TEST(CliTable, MatchesGolden) {
  const CliRun r = run({"table"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 15u);
  EXPECT_EQ(r.out, slurp(std::string(SFLAB_TEST_DIR) + "/golden/table.csv"));
}

TEST(CliTable, JsonAndFilter) {
  const CliRun r = run({"--format", "json", "table", "--type", "II"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["order"], "6");
  EXPECT_EQ(j[0]["theta_complete"], "1/6");
  EXPECT_EQ(run({"table", "--type", "V"}).code, cli::kInputError);
}

TEST(CliTable, OutFile) {
  const fs::path p = fs::temp_directory_path() / "sflab_cli_table.csv";
  const CliRun r = run({"--out", p.string(), "table"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(lines(slurp(p.string())).size(), 15u);
  fs::remove(p);
}

TEST(CliFiberInfo, ReportsTypeAndAngles) {
  const CliRun r = run({"fiber-info", "--model", data("ii_m1.model"), "--z", "0.3,0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("II"), std::string::npos);
  EXPECT_EQ(run({"fiber-info", "--model", data("missing.model")}).code, cli::kInputError);
  EXPECT_EQ(run({"fiber-info", "--model", data("i1.model"), "--z", "0,0"}).code, cli::kInputError);
}

TEST(CliMetricEval, MatchesLibraryValues) {
  const CliRun r = run({"--format", "json", "metric-eval", "--model", data("i1.model"), "--z", "0.1,0", "--w", "0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("h_ww"), std::string::npos);
  const json j = json::parse(r.out);
  const json& row = j.is_array() ? j[0] : j;
  EXPECT_NEAR(row["h_ww"].get<double>(), kPi / std::log(10.0), 1e-14);
}

TEST(CliScan, CurvatureHeaderAndRows) {
  const CliRun r = run({"scan", "curvature", "--model", data("i1.model"), "--radii", "1e-12:1e-6:4:log"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "r,z_abs,theta_sq,target,ratio");
}

TEST(CliScan, ConeAngleCheck) {
  const CliRun r = run({"--check", "scan", "cone-angle", "--model", data("ii.model")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("check passed"), std::string::npos);
}

TEST(CliScan, BadRadii) {
  EXPECT_EQ(run({"scan", "curvature", "--model", data("i1.model"), "--radii", "1:0:3:log"}).code, cli::kInputError);
  EXPECT_EQ(run({"scan", "curvature", "--model", data("i1.model"), "--radii", "-1:1e-3:3:log"}).code,
            cli::kInputError);
  EXPECT_EQ(run({"scan", "curvature", "--model", data("i1.model"), "--radii", "1e-3"}).code, cli::kInputError);
  EXPECT_EQ(run({"scan", "sideways", "--model", data("i1.model")}).code, cli::kInputError);
  EXPECT_EQ(run({"scan", "alh", "--model", data("i1.model")}).code, cli::kInputError);
}

TEST(CliParseRadii, Forms) {
  const auto a = cli::parse_radii("1e-3:1e-1:3:log");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_NEAR(a[1], 1e-2, 1e-16);
  const auto b = cli::parse_radii("0:1:5:lin");
  EXPECT_DOUBLE_EQ(b[2], 0.5);
  EXPECT_THROW(cli::parse_radii("1:2:2.5:lin"), InputError);
  EXPECT_THROW(cli::parse_radii("1:2:3:cubic"), InputError);
}

TEST(CliMaSolve, ZeroDataGivesZero) {
  const fs::path f = fs::temp_directory_path() / "sflab_cli_f.bin";
  const fs::path u = fs::temp_directory_path() / "sflab_cli_u.bin";
  write_grid_binary(f.string(), TorusGrid(2, 4));
  const CliRun r = run({"--out", u.string(), "ma-solve", "--problem", f.string(), "--epsilon", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_grid(u.string()).max_abs(), 0.0);
  const json j = json::parse(slurp(u.string() + ".json"));
  EXPECT_LE(j["residual_inf"].get<double>(), 1e-10);
  for (const fs::path& p : {f, u, fs::path(u.string() + ".json")}) fs::remove(p);
}

TEST(CliMaSolve, Errors) {
  EXPECT_EQ(run({"ma-solve", "--problem", "/nonexistent.bin"}).code, cli::kInputError);
  EXPECT_EQ(run({"ma-solve", "--manufactured", "--m", "3"}).code, cli::kInputError);
  EXPECT_EQ(run({"ma-solve", "--manufactured", "--sizes", "8,12"}).code, cli::kInputError);
}

TEST(CliMaSolve, ManufacturedCheck) {
  const CliRun r = run({"--check", "ma-solve", "--manufactured", "--m", "1", "--sizes", "16,32,64"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliSobolev, Check) {
  const CliRun r = run({"--check", "--format", "json", "sobolev-probe", "--beta", "3", "--alpha", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"sobolev-probe", "--beta", "5"}).code, cli::kInputError);
}

TEST(CliDeterminism, RepeatedRunsAreIdentical) {
  const std::vector<std::string> args{"scan", "volume", "--model", data("i1.model"), "--radii", "1e2:1e4:5:log"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> v{"--seed", "7", "verify", "--json", "--only", "1"};
  EXPECT_EQ(run(v).out, run(v).out);
}

TEST(CliVerify, GoldenCriterionJson) {
  const CliRun r = run({"verify", "--json", "--only", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.contains("criteria"));
  ASSERT_EQ(j["criteria"].size(), 1u);
  EXPECT_EQ(j["criteria"][0]["id"], 1);
  EXPECT_EQ(j["criteria"][0]["pass"], true);
  EXPECT_EQ(run({"verify", "--only", "14"}).code, cli::kInputError);
}

TEST(Acceptance, CorruptedRegistryFailsGoldenCheck) {
  std::vector<TableRow> rows = table_registry();
  EXPECT_TRUE(check_golden_table(rows, 1).pass);
  rows[2].theta_complete = 0.2;
  EXPECT_FALSE(check_golden_table(rows, 1).pass);
  rows = table_registry();
  rows.pop_back();
  EXPECT_FALSE(check_golden_table(rows, 1).pass);
}
