#include <gtest/gtest.h>

#include <json.hpp>

#include "percept/errors.hpp"
#include "percept/report.hpp"
#include "test_support.hpp"

namespace percept {
namespace {

using testing::load_fixture;

PerceptionReport admissions_report(const Metric& metric = Metric::w2()) {
  auto a = load_fixture("r1_admissions.json");
  auto b = load_fixture("r2_admissions.json");
  return causal_perception(a, b, profile_interventions(a), metric, Aggregation::kMax, 0.01);
}

TEST(RenderReport, PerceptionJsonKeysInOrder) {
  auto text = render_report(admissions_report(), Format::kJson);
  auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema", "receivers", "shared_variables", "metric", "aggregation",
                                            "epsilon", "interventions", "aggregate_distance", "perception", "kind"}));
  EXPECT_EQ(j["schema"], "percept/1");
  EXPECT_EQ(j["kind"], "unfaithful");
  EXPECT_EQ(j["interventions"][2]["do"]["Z"], 1.0);
  EXPECT_EQ(text.back(), '\n');
}

TEST(RenderReport, KlCarriesRidge) {
  auto j = nlohmann::json::parse(render_report(admissions_report(Metric::kl(1e-6)), Format::kJson));
  EXPECT_EQ(j["metric"], "kl");
  EXPECT_EQ(j["ridge"], 1e-6);
}

TEST(RenderReport, FloatsRoundTrip) {
  auto rep = admissions_report();
  auto j = nlohmann::json::parse(render_report(rep, Format::kJson));
  for (std::size_t i = 0; i < rep.interventions.size(); ++i)
    EXPECT_EQ(j["interventions"][i]["distance"].get<double>(), rep.interventions[i].distance);
  EXPECT_EQ(j["aggregate_distance"].get<double>(), rep.aggregate_distance);
}

TEST(RenderReport, Deterministic) {
  EXPECT_EQ(render_report(admissions_report(), Format::kJson), render_report(admissions_report(), Format::kJson));
  EXPECT_EQ(render_report(admissions_report(), Format::kText), render_report(admissions_report(), Format::kText));
}

TEST(RenderReport, FallacyText) {
  EXPECT_EQ(render_report(check_conjunction(0.1, 0.05, 0.9), Format::kText).rfind("VIOLATED", 0), 0u);
  auto ok = render_report(check_conjunction(0.04, 0.05, 0.9), Format::kText);
  EXPECT_EQ(ok.find("VIOLATED"), std::string::npos);
}

TEST(RenderReport, Consistency) {
  auto p = load_fixture("consistency_pair.json");
  auto rep = check_exact_transformation(p, profile_interventions(p), Metric::w2(), 1e-9);
  auto j = nlohmann::json::parse(render_report(rep, Format::kJson));
  EXPECT_EQ(j["schema"], "percept/1");
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["tau"], "mean");
}

TEST(RenderModel, TextHasFactorization) {
  auto scm = assemble_high_level(load_fixture("r1_admissions.json"));
  auto text = render_model("r1", scm, Format::kText);
  EXPECT_NE(text.find("P(Y|X1,X2)·P(X2|Z)·P(X1|X2,Z)·P(Z)"), std::string::npos);
}

TEST(ParseFormat, Values) {
  EXPECT_EQ(parse_format("json"), Format::kJson);
  EXPECT_EQ(parse_format("text"), Format::kText);
  EXPECT_THROW(parse_format("yaml"), ValidationError);
}

}  // namespace
}  // namespace percept
