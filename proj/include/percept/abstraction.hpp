#pragma once

#include <string>
#include <vector>

#include "percept/gaussian.hpp"
#include "percept/intervention.hpp"
#include "percept/profile.hpp"

namespace percept {

/// Maps a variable-level intervention to a descriptor-level one.
///  - equal split: do(X = x) -> do(X.θ_k = x / n) for all n descriptors
///  - single descriptor k: do(X = x) -> do(X.θ_k = x, other X.θ = 0)
struct OmegaRule {
  enum class Kind { kEqualSplit, kSingleDescriptor };
  Kind kind = Kind::kEqualSplit;
  std::size_t index = 0;

  static OmegaRule equal_split() { return {}; }
  static OmegaRule single_descriptor(std::size_t k) { return {Kind::kSingleDescriptor, k}; }
  /// "equal-split" or "single-descriptor:<k>".
  std::string name() const;
  /// Inverse of name(); throws ValidationError.
  static OmegaRule parse(std::string_view s);
};

/// Throws MissingDescriptors when a target has no descriptors, or
/// ValidationError when a single-descriptor index is out of range.
InterventionSpec omega(const InterventionSpec& spec, const ReceiverProfile& profile,
                       const OmegaRule& rule);

inline InterventionSpec omega_equal_split(const InterventionSpec& spec,
                                          const ReceiverProfile& profile) {
  return omega(spec, profile, OmegaRule::equal_split());
}

/// Variables of `profile` that have descriptors, in declaration order.
std::vector<std::string> abstracted_variables(const ReceiverProfile& profile);

/// Each abstracted variable becomes the sum of its descriptors:
/// mean -> T·μ, cov -> T·Σ·Tᵀ. `low` must be over exactly the profile's
/// descriptor nodes (any order). Throws VariableMismatch.
GaussianDist tau_pushforward(const GaussianDist& low, const ReceiverProfile& profile);

/// Variable-level model used for verification: assemble_high_level with
/// every abstracted variable's noise set to the sum of its descriptor
/// noise means and variances.
LinearScm matched_high_level(const ReceiverProfile& profile);

struct ConsistencyRow {
  InterventionSpec high;
  InterventionSpec low;
  double distance = 0.0;
  bool pass = false;
};

struct ConsistencyReport {
  std::string receiver;
  Tau tau = Tau::kMean;
  Metric metric;
  OmegaRule omega;
  double tolerance = 0.0;
  std::vector<std::string> variables;
  std::vector<ConsistencyRow> rows;  // sorted by high-level intervention
  bool pass = false;
};

/// For each high-level intervention i, compares the pushforward of the
/// low-level distribution under omega(i) with the matched high-level
/// distribution under i, on the abstracted variables.
ConsistencyReport check_exact_transformation(const ReceiverProfile& profile,
                                             const InterventionSet& iset_high,
                                             const Metric& metric, double tol,
                                             const OmegaRule& rule = OmegaRule::equal_split(),
                                             unsigned workers = 1);

}  // namespace percept
