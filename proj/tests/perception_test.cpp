#include <gtest/gtest.h>

#include "percept/errors.hpp"
#include "percept/perception.hpp"
#include "test_support.hpp"

namespace percept {
namespace {

using testing::load_fixture;

TEST(CausalPerception, AdmissionsReceiversAreUnfaithful) {
  auto r1 = load_fixture("r1_admissions.json");
  auto r2 = load_fixture("r2_admissions.json");
  auto rep = causal_perception(r1, r2, profile_interventions(r1), Metric::w2(), Aggregation::kMax, 0.01);
  EXPECT_EQ(rep.kind, PerceptionKind::kUnfaithful);
  EXPECT_TRUE(rep.perception);
  EXPECT_GT(rep.aggregate_distance, 0.0);
  EXPECT_EQ(rep.shared_variables, (std::vector<std::string>{"Z", "X1", "X2", "Y"}));
  ASSERT_EQ(rep.interventions.size(), 3u);
  // do(Z=1): X1 means 0.95 vs 0.15, Y means 0.725 vs 0.325
  EXPECT_NEAR(rep.interventions[2].distance, std::sqrt(0.8 * 0.8 + 0.4 * 0.4), 1e-12);
  EXPECT_EQ(rep.interventions[1].distance, 0.0);
}

TEST(CausalPerception, CloneHasNoPerception) {
  auto r1 = load_fixture("r1_admissions.json");
  auto clone = load_fixture("r1_clone.json");
  auto rep = causal_perception(r1, clone, profile_interventions(r1), Metric::w2(), Aggregation::kMax, 1e-6);
  EXPECT_FALSE(rep.perception);
  EXPECT_EQ(rep.aggregate_distance, 0.0);
  EXPECT_EQ(rep.kind, PerceptionKind::kNone);
}

TEST(CausalPerception, SameGraphDifferentBetaIsInconsistentForEveryMetric) {
  auto a = load_fixture("beta_r1.json");
  auto b = load_fixture("beta_r2.json");
  for (auto metric : {Metric::w2(), Metric::kl(1e-9)})
    for (double eps : {1e-6, 0.1}) {
      auto rep = causal_perception(a, b, profile_interventions(a), metric, Aggregation::kMean, eps);
      EXPECT_EQ(rep.kind, PerceptionKind::kInconsistent);
      EXPECT_TRUE(rep.perception);
    }
}

TEST(CausalPerception, SymmetricUnderW2) {
  auto a = load_fixture("beta_r1.json");
  auto b = load_fixture("r2_admissions.json");
  auto ab = causal_perception(a, b, profile_interventions(a), Metric::w2(), Aggregation::kMean, 0.1);
  auto ba = causal_perception(b, a, profile_interventions(a), Metric::w2(), Aggregation::kMean, 0.1);
  EXPECT_EQ(ab.aggregate_distance, ba.aggregate_distance);
  EXPECT_EQ(ab.kind, ba.kind);
}

TEST(CausalPerception, Errors) {
  auto a = load_fixture("r1_admissions.json");
  auto other = parse_profile(R"({"id": "o", "variables": ["Q"]})");
  EXPECT_THROW(causal_perception(a, other, InterventionSet{}, Metric::w2(), Aggregation::kMax, 0.1),
               NoSharedVariables);
  auto partial = parse_profile(R"({"id": "p", "variables": ["X1", "Y"]})");
  EXPECT_THROW(causal_perception(a, partial, InterventionSet({make_intervention({{"Z", 1.0}})}), Metric::w2(),
                                 Aggregation::kMax, 0.1),
               UnknownTarget);
  EXPECT_THROW(causal_perception(a, a, InterventionSet{}, Metric::w2(), Aggregation::kMax, 0.0), ValidationError);
}

TEST(ObservationalPerception, NullOnly) {
  auto r1 = load_fixture("r1_admissions.json");
  auto r2 = load_fixture("r2_admissions.json");
  auto rep = observational_perception(r1, r2, Metric::w2(), 0.01);
  ASSERT_EQ(rep.interventions.size(), 1u);
  EXPECT_TRUE(rep.interventions[0].spec.is_null());
  EXPECT_GT(rep.aggregate_distance, 0.0);
}

TEST(ClassifyKind, NoiseDivergent) {
  auto a = load_fixture("r1_admissions.json");
  auto b = a;
  b.noise["Y"] = {0.0, 2.0};
  EXPECT_EQ(classify_kind(a, b, 1e-9, 1e-9), PerceptionKind::kNoiseDivergent);
  EXPECT_EQ(classify_kind(a, a, 1e-9, 1e-9), PerceptionKind::kNone);
  EXPECT_EQ(classify_kind(a, b, 1e-9, 2.0), PerceptionKind::kNone);
}

TEST(MatchPosets, EmptyMatchedSet) {
  auto scm = testing::admissions_scm(true);
  DistributionPoset a({{make_intervention({{"Z", 1.0}}), implied_distribution(scm)}});
  DistributionPoset b({{make_intervention({{"Z", 2.0}}), implied_distribution(scm)}});
  EXPECT_THROW(match_posets(a, b, {"Z"}, Metric::w2()), EmptyMatchedSet);
}

TEST(Aggregate, MaxAndMean) {
  std::vector<InterventionDistance> rows{{InterventionSpec{}, 1.0}, {make_intervention({{"Z", 1.0}}), 3.0}};
  EXPECT_EQ(aggregate(rows, Aggregation::kMax), 3.0);
  EXPECT_EQ(aggregate(rows, Aggregation::kMean), 2.0);
  EXPECT_EQ(parse_aggregation("mean"), Aggregation::kMean);
  EXPECT_THROW(parse_aggregation("median"), ValidationError);
}

TEST(PibReport, RanksByDistance) {
  auto ref = load_fixture("r1_admissions.json");
  std::vector<ReceiverProfile> others{load_fixture("r1_clone.json"), load_fixture("r2_admissions.json"),
                                      load_fixture("beta_r2.json")};
  auto rows = pib_report(ref, others, profile_interventions(ref), Metric::w2(), Aggregation::kMax, 0.01);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows.back().id, "r1_clone");
  EXPECT_EQ(rows.back().aggregate_distance, 0.0);
  EXPECT_GE(rows[0].aggregate_distance, rows[1].aggregate_distance);
}

TEST(Conjunction, ExtensionRule) {
  auto v = check_conjunction(0.3, 0.2, 0.9);
  EXPECT_TRUE(v.violated);
  EXPECT_NEAR(v.margin, 0.1, 1e-15);
  EXPECT_FALSE(check_conjunction(0.2, 0.2, 0.9).violated);
  EXPECT_FALSE(check_conjunction(0.0, 0.0, 0.0).violated);
  EXPECT_THROW(check_conjunction(1.1, 0.2, 0.3), OutOfRangeProbability);
  EXPECT_THROW(check_conjunction(0.1, -0.2, 0.3), OutOfRangeProbability);
  EXPECT_THROW(check_conjunction(std::nan(""), 0.2, 0.3), OutOfRangeProbability);
}

TEST(Conjunction, JointAboveMarginal) {
  EXPECT_TRUE(check_conjunction(0.10, 0.05, 0.90).violated);
  auto boundary = check_conjunction(0.05, 0.05, 0.90);
  EXPECT_FALSE(boundary.violated);
  EXPECT_EQ(boundary.margin, 0.0);
  EXPECT_FALSE(check_conjunction(0.04, 0.05, 0.90).violated);
}

TEST(PibReport, SelfAndOrderInvariance) {
  auto ref = load_fixture("r1_admissions.json");
  auto iset = profile_interventions(ref);
  auto self = pib_report(ref, {ref}, iset, Metric::w2(), Aggregation::kMax, 0.01);
  ASSERT_EQ(self.size(), 1u);
  EXPECT_EQ(self[0].aggregate_distance, 0.0);
  EXPECT_EQ(self[0].kind, PerceptionKind::kNone);
  auto r2 = load_fixture("r2_admissions.json");
  auto clone = load_fixture("r1_clone.json");
  auto x = pib_report(ref, {r2, clone}, iset, Metric::w2(), Aggregation::kMax, 0.01);
  auto y = pib_report(ref, {clone, r2}, iset, Metric::w2(), Aggregation::kMax, 0.01);
  EXPECT_EQ(x[0].id, "r2_admissions");
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].id, y[i].id);
    EXPECT_EQ(x[i].aggregate_distance, y[i].aggregate_distance);
  }
}

TEST(CausalPerception, AggregationAndThresholdProperties) {
  auto a = load_fixture("r1_admissions.json");
  auto b = load_fixture("beta_r2.json");
  auto small = enumerate_interventions({{"Z", {0.0, 1.0}}}, 1);
  auto large = enumerate_interventions({{"Z", {0.0, 1.0, 2.0}}, {"X2", {-1.0}}}, 2);
  auto mx = causal_perception(a, b, small, Metric::w2(), Aggregation::kMax, 0.01);
  auto mn = causal_perception(a, b, small, Metric::w2(), Aggregation::kMean, 0.01);
  EXPECT_GE(mx.aggregate_distance, mn.aggregate_distance);
  auto bigger = causal_perception(a, b, large, Metric::w2(), Aggregation::kMax, 0.01);
  EXPECT_GE(bigger.aggregate_distance, mx.aggregate_distance);
  bool was = true;
  for (double eps : {1e-6, 1e-3, 0.1, 1.0, 10.0}) {
    bool now = causal_perception(a, b, small, Metric::w2(), Aggregation::kMax, eps).perception;
    EXPECT_FALSE(now && !was);
    was = now;
  }
  EXPECT_FALSE(causal_perception(a, b, small, Metric::w2(), Aggregation::kMax, 1e6).perception);
}

TEST(CausalPerception, NullOnlyEqualsObservational) {
  auto a = load_fixture("r1_admissions.json");
  auto b = load_fixture("r2_admissions.json");
  auto c = causal_perception(a, b, InterventionSet{}, Metric::w2(), Aggregation::kMax, 0.01);
  auto o = observational_perception(a, b, Metric::w2(), 0.01);
  EXPECT_EQ(c.aggregate_distance, o.aggregate_distance);
  EXPECT_EQ(c.kind, o.kind);
  EXPECT_EQ(c.perception, o.perception);
}

}  // namespace
}  // namespace percept
