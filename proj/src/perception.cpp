#include "percept/perception.hpp"

#include <algorithm>
#include <cmath>

#include "percept/errors.hpp"

namespace percept {

namespace {

std::vector<std::string> shared_variables(const ReceiverProfile& a, const ReceiverProfile& b) {
  std::vector<std::string> out;
  for (const auto& v : a.variables)
    if (std::find(b.variables.begin(), b.variables.end(), v) != b.variables.end()) out.push_back(v);
  if (out.empty())
    throw NoSharedVariables("receivers '" + a.id + "' and '" + b.id + "' share no variables");
  return out;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
}

}  // namespace

std::string to_string(Aggregation agg) { return agg == Aggregation::kMax ? "max" : "mean"; }

Aggregation parse_aggregation(std::string_view s) {
  if (s == "max") return Aggregation::kMax;
  if (s == "mean") return Aggregation::kMean;
  throw ValidationError("unknown aggregation '" + std::string(s) + "' (expected max or mean)");
}

std::string to_string(PerceptionKind kind) {
  switch (kind) {
    case PerceptionKind::kNone: return "none";
    case PerceptionKind::kUnfaithful: return "unfaithful";
    case PerceptionKind::kInconsistent: return "inconsistent";
    case PerceptionKind::kNoiseDivergent: return "noise-divergent";
  }
  return "";
}

PerceptionKind classify_kind(const ReceiverProfile& a, const ReceiverProfile& b,
                             double tol_coef, double tol_noise) {
  if (!(tol_coef > 0.0) || !(tol_noise > 0.0)) throw ValidationError("tolerances must be positive");
  const auto ma = assemble_high_level(a);
  const auto mb = assemble_high_level(b);
  if (!(ma.graph() == mb.graph())) return PerceptionKind::kUnfaithful;

  const auto ca = ma.coefficients();
  const auto cb = mb.coefficients();
  for (const auto& [edge, beta] : ca)
    if (std::abs(beta - cb.at(edge)) > tol_coef) return PerceptionKind::kInconsistent;

  for (const auto& v : a.variables) {
    const auto& na = ma.noise(ma.graph().index_of(v));
    const auto& nb = mb.noise(mb.graph().index_of(v));
    if (std::abs(na.mean - nb.mean) > tol_noise || std::abs(na.var - nb.var) > tol_noise)
      return PerceptionKind::kNoiseDivergent;
  }
  return PerceptionKind::kNone;
}

std::vector<InterventionDistance> match_posets(const DistributionPoset& a,
                                               const DistributionPoset& b,
                                               const std::vector<std::string>& shared,
                                               const Metric& metric) {
  std::vector<InterventionDistance> out;
  for (const auto& entry : a.entries()) {
    const auto* other = b.find(entry.spec);
    if (!other) continue;
    out.push_back({entry.spec, distance(marginal(entry.dist, shared), marginal(*other, shared), metric)});
  }
  if (out.empty()) throw EmptyMatchedSet("the two posets share no intervention");
  std::sort(out.begin(), out.end(),
            [](const InterventionDistance& x, const InterventionDistance& y) { return x.spec < y.spec; });
  return out;
}

double aggregate(const std::vector<InterventionDistance>& rows, Aggregation agg) {
  if (rows.empty()) throw EmptyMatchedSet("nothing to aggregate");
  if (agg == Aggregation::kMax) {
    double m = rows.front().distance;
    for (const auto& r : rows) m = std::max(m, r.distance);
    return m;
  }
  double sum = 0.0;
  for (const auto& r : rows) sum += r.distance;
  return sum / static_cast<double>(rows.size());
}

PerceptionReport causal_perception(const ReceiverProfile& a, const ReceiverProfile& b,
                                   const InterventionSet& iset, const Metric& metric,
                                   Aggregation agg, double epsilon, const KindTolerances& tol,
                                   unsigned workers) {
  check_epsilon(epsilon);
  const auto shared = shared_variables(a, b);
  for (const auto& s : iset)
    for (const auto& t : s.targets())
      if (std::find(shared.begin(), shared.end(), t) == shared.end())
        throw UnknownTarget("intervention target '" + t + "' is not shared by both receivers");

  const auto pa = implied_poset(assemble_high_level(a), iset, workers);
  const auto pb = implied_poset(assemble_high_level(b), iset, workers);

  PerceptionReport r;
  r.receivers = {a.id, b.id};
  r.shared_variables = shared;
  r.metric = metric;
  r.aggregation = agg;
  r.epsilon = epsilon;
  r.interventions = match_posets(pa, pb, shared, metric);
  r.aggregate_distance = aggregate(r.interventions, agg);
  r.perception = r.aggregate_distance > epsilon;
  r.kind = classify_kind(a, b, tol.coefficient, tol.noise);
  return r;
}

PerceptionReport observational_perception(const ReceiverProfile& a, const ReceiverProfile& b,
                                          const Metric& metric, double epsilon,
                                          const KindTolerances& tol) {
  return causal_perception(a, b, InterventionSet{}, metric, Aggregation::kMax, epsilon, tol);
}

std::vector<PibRow> pib_report(const ReceiverProfile& reference,
                               const std::vector<ReceiverProfile>& others,
                               const InterventionSet& iset, const Metric& metric,
                               Aggregation agg, double epsilon, const KindTolerances& tol,
                               unsigned workers) {
  if (others.empty()) throw ValidationError("pib needs at least one receiver to rank");
  std::vector<PibRow> rows;
  for (const auto& o : others) {
    const auto r = causal_perception(reference, o, iset, metric, agg, epsilon, tol, workers);
    rows.push_back({o.id, r.aggregate_distance, r.kind});
  }
  std::sort(rows.begin(), rows.end(), [](const PibRow& x, const PibRow& y) {
    if (x.aggregate_distance != y.aggregate_distance) return x.aggregate_distance > y.aggregate_distance;
    return x.id < y.id;
  });
  return rows;
}

FallacyVerdict check_conjunction(double p_joint, double p_a, double p_b) {
  for (double p : {p_joint, p_a, p_b})
    if (!(p >= 0.0 && p <= 1.0)) throw OutOfRangeProbability("probabilities must lie in [0, 1]");
  const double bound = std::min(p_a, p_b);
  return {p_joint, p_a, p_b, p_joint > bound, p_joint - bound};
}

}  // namespace percept
