#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "percept/abstraction.hpp"
#include "percept/gaussian.hpp"
#include "percept/intervention.hpp"
#include "percept/perception.hpp"
#include "percept/scm.hpp"

namespace percept {

inline constexpr std::string_view kReportSchema = "percept/1";

enum class Format { kJson, kText };
/// "json" or "text"; throws ValidationError.
Format parse_format(std::string_view s);

// JSON output uses a fixed key order and shortest round-trip decimals;
// identical reports render to identical bytes.

std::string render_report(const PerceptionReport& report, Format format);
std::string render_report(const ConsistencyReport& report, Format format);
std::string render_report(const FallacyVerdict& verdict, Format format);

struct PibReport {
  std::string reference;
  Metric metric;
  Aggregation aggregation = Aggregation::kMax;
  double epsilon = 0.0;
  std::vector<PibRow> ranking;
};
std::string render_report(const PibReport& report, Format format);

/// Coefficients, noise and factorization of an assembled model.
std::string render_model(const std::string& receiver, const LinearScm& scm, Format format);

/// Mean and covariance of an implied distribution.
std::string render_distribution(const std::string& receiver, const InterventionSpec& spec,
                                const GaussianDist& dist, Format format);

}  // namespace percept
