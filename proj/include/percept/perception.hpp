#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "percept/gaussian.hpp"
#include "percept/intervention.hpp"
#include "percept/profile.hpp"

namespace percept {

enum class Aggregation { kMax, kMean };
std::string to_string(Aggregation agg);
Aggregation parse_aggregation(std::string_view s);

/// none: no disagreement; unfaithful: different labeled graphs;
/// inconsistent: same graph, different coefficients; noise-divergent:
/// same graph and coefficients, different noise.
enum class PerceptionKind { kNone, kUnfaithful, kInconsistent, kNoiseDivergent };
std::string to_string(PerceptionKind kind);

struct KindTolerances {
  double coefficient = 1e-9;
  double noise = 1e-9;
};

struct InterventionDistance {
  InterventionSpec spec;
  double distance = 0.0;
};

struct PerceptionReport {
  std::array<std::string, 2> receivers;
  std::vector<std::string> shared_variables;
  Metric metric;
  Aggregation aggregation = Aggregation::kMax;
  double epsilon = 0.0;
  std::vector<InterventionDistance> interventions;
  double aggregate_distance = 0.0;
  bool perception = false;
  PerceptionKind kind = PerceptionKind::kNone;
};

/// Compares the assembled high-level models only; independent of metric,
/// aggregation and epsilon, and symmetric in (a, b).
PerceptionKind classify_kind(const ReceiverProfile& a, const ReceiverProfile& b,
                             double tol_coef, double tol_noise);

/// Single-entry report for the null intervention.
/// Throws NoSharedVariables; ValidationError when epsilon <= 0.
PerceptionReport observational_perception(const ReceiverProfile& a, const ReceiverProfile& b,
                                          const Metric& metric, double epsilon,
                                          const KindTolerances& tol = {});

/// Distances between the two receivers' interventional distributions,
/// matched by identical intervention and restricted to shared variables,
/// aggregated by max or mean. Throws NoSharedVariables, UnknownTarget
/// (a target outside the shared variables), EmptyMatchedSet.
PerceptionReport causal_perception(const ReceiverProfile& a, const ReceiverProfile& b,
                                   const InterventionSet& iset, const Metric& metric,
                                   Aggregation agg, double epsilon,
                                   const KindTolerances& tol = {}, unsigned workers = 1);

/// Pairs entries with identical specs and aggregates their distances on
/// `shared`. Throws EmptyMatchedSet when nothing matches.
std::vector<InterventionDistance> match_posets(const DistributionPoset& a,
                                               const DistributionPoset& b,
                                               const std::vector<std::string>& shared,
                                               const Metric& metric);

double aggregate(const std::vector<InterventionDistance>& rows, Aggregation agg);

struct PibRow {
  std::string id;
  double aggregate_distance = 0.0;
  PerceptionKind kind = PerceptionKind::kNone;
};

/// Deviation of every receiver from a representative one, sorted by
/// descending aggregate distance, ties by id.
std::vector<PibRow> pib_report(const ReceiverProfile& reference,
                               const std::vector<ReceiverProfile>& others,
                               const InterventionSet& iset, const Metric& metric,
                               Aggregation agg, double epsilon,
                               const KindTolerances& tol = {}, unsigned workers = 1);

struct FallacyVerdict {
  double p_joint = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  bool violated = false;
  double margin = 0.0;  // p_joint - min(p_a, p_b)
};

/// Extension rule P(A ∧ B) <= min(P(A), P(B)).
/// Throws OutOfRangeProbability unless every input is in [0, 1].
FallacyVerdict check_conjunction(double p_joint, double p_a, double p_b);

}  // namespace percept
