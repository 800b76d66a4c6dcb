#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "percept/cli.hpp"
#include "percept/errors.hpp"
#include "test_support.hpp"

namespace percept {
namespace {

using testing::fixture_path;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Cli, ValidateOk) {
  auto r = run({"validate", fixture_path("r1_admissions.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok: graph acyclic, 5 edges\n");
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ValidateCycleNamesIt) {
  auto r = run({"validate", fixture_path("cyclic.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("cycle"), std::string::npos);
  EXPECT_NE(r.err.find("A"), std::string::npos);
  EXPECT_EQ(lines(r.err), 1u);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"validate"}).code, 2);
  EXPECT_EQ(run({"compare", fixture_path("r1_admissions.json"), fixture_path("r2_admissions.json"), "--colour"}).code, 2);
  EXPECT_EQ(run({"compare", fixture_path("r1_admissions.json"), fixture_path("r2_admissions.json"), "--epsilon", "0"}).code, 2);
  auto missing = run({"validate", "/nonexistent/profile.json"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(lines(missing.err), 1u);
}

TEST(Cli, SchemaErrorIsValidation) {
  auto r = run({"validate", fixture_path("bad_shape.json")});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, CompareUnfaithful) {
  auto r = run({"compare", fixture_path("r1_admissions.json"), fixture_path("r2_admissions.json"), "--metric", "w2",
                "--agg", "max", "--epsilon", "0.01", "--interventions", fixture_path("admissions_grid.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "unfaithful");
  EXPECT_EQ(j["perception"], true);
  EXPECT_EQ(j["interventions"].size(), 3u);
}

TEST(Cli, CompareSwapKeepsDistanceAndKind) {
  auto ab = nlohmann::json::parse(run({"compare", fixture_path("beta_r1.json"), fixture_path("r2_admissions.json")}).out);
  auto ba = nlohmann::json::parse(run({"compare", fixture_path("r2_admissions.json"), fixture_path("beta_r1.json")}).out);
  EXPECT_EQ(ab["aggregate_distance"], ba["aggregate_distance"]);
  EXPECT_EQ(ab["kind"], ba["kind"]);
  EXPECT_EQ(ab["receivers"][0], ba["receivers"][1]);
}

TEST(Cli, CompareObservational) {
  auto j = nlohmann::json::parse(
      run({"compare", fixture_path("r1_admissions.json"), fixture_path("r2_admissions.json"), "--observational"}).out);
  EXPECT_EQ(j["interventions"].size(), 1u);
}

TEST(Cli, ConsistencyVerdictIsData) {
  auto r = run({"consistency", fixture_path("consistency_pair.json"), "--tau", "sum"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["pass"], false);
}

TEST(Cli, FallacyAndRange) {
  auto r = run({"fallacy", "--joint", "0.1", "--pa", "0.05", "--pb", "0.9", "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("VIOLATED", 0), 0u);
  EXPECT_EQ(run({"fallacy", "--joint", "1.5", "--pa", "0.05", "--pb", "0.9"}).code, 3);
}

TEST(Cli, SampleDeterministicAcrossWorkers) {
  auto a = run({"sample", fixture_path("r1_admissions.json"), "-n", "9000", "--seed", "7", "--workers", "1"});
  auto b = run({"sample", fixture_path("r1_admissions.json"), "-n", "9000", "--seed", "7", "--workers", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 11), "Z,X1,X2,Y\r\n");
}

TEST(Cli, DistributionWithDo) {
  auto r = run({"distribution", fixture_path("r1_admissions.json"), "--do", "Z=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["mean"][1].get<double>(), 0.95, 1e-12);
}

TEST(Cli, OutputFile) {
  const std::string path = ::testing::TempDir() + "percept_cli_out.json";
  auto r = run({"build", fixture_path("r1_admissions.json"), "-o", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(buf.str())["schema"], "percept/1");
}

TEST(ParseDo, Values) {
  auto s = cli::parse_do("X=1,Y=-0.5");
  EXPECT_EQ(s.label(), "do(X=1, Y=-0.5)");
  EXPECT_THROW(cli::parse_do("X"), ValidationError);
  EXPECT_THROW(cli::parse_do("X=abc"), ValidationError);
  EXPECT_THROW(cli::parse_do("X=1,X=2"), ValidationError);
}

TEST(ParseGrid, Document) {
  auto set = cli::parse_grid(R"({"grids": {"Z": [0, 1]}, "max_order": 1})");
  EXPECT_EQ(set.size(), 3u);
  EXPECT_THROW(cli::parse_grid(R"({"grid": {}})"), SchemaError);
}

}  // namespace
}  // namespace percept
