#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "percept/gaussian.hpp"
#include "percept/scm.hpp"

namespace percept {

using Assignment = std::pair<std::string, double>;

/// Atomic do-intervention: a set of (variable := value) assignments kept
/// sorted by variable name. The default-constructed spec is the null
/// intervention.
class InterventionSpec {
 public:
  InterventionSpec() = default;

  /// Throws DuplicateTarget or NonFiniteValue.
  static InterventionSpec make(std::vector<Assignment> assignments);

  const std::vector<Assignment>& assignments() const noexcept { return assignments_; }
  bool is_null() const noexcept { return assignments_.empty(); }
  std::size_t order() const noexcept { return assignments_.size(); }
  std::vector<std::string> targets() const;
  std::optional<double> value(std::string_view target) const;

  /// "∅" or "do(X1=0.5, Z=1)".
  std::string label() const;

  friend bool operator==(const InterventionSpec&, const InterventionSpec&) = default;
  /// Sort key: number of targets, then target names, then values.
  friend bool operator<(const InterventionSpec& a, const InterventionSpec& b);

 private:
  std::vector<Assignment> assignments_;
};

inline InterventionSpec make_intervention(std::vector<Assignment> assignments) {
  return InterventionSpec::make(std::move(assignments));
}

/// Refinement order: targets(i) ⊆ targets(j) and the values agree there.
bool leq(const InterventionSpec& i, const InterventionSpec& j);

/// Deduplicated, sorted set of interventions that always holds the null
/// intervention (first).
class InterventionSet {
 public:
  InterventionSet() : specs_{InterventionSpec{}} {}
  explicit InterventionSet(std::vector<InterventionSpec> specs);

  const std::vector<InterventionSpec>& specs() const noexcept { return specs_; }
  std::size_t size() const noexcept { return specs_.size(); }
  auto begin() const noexcept { return specs_.begin(); }
  auto end() const noexcept { return specs_.end(); }
  bool contains(const InterventionSpec& s) const;

 private:
  std::vector<InterventionSpec> specs_;
};

using InterventionGrid = std::map<std::string, std::vector<double>>;

/// The null intervention plus every intervention on at most `max_order`
/// distinct grid variables with values drawn from the grid.
/// Throws NonFiniteValue.
InterventionSet enumerate_interventions(const InterventionGrid& grid, std::size_t max_order);

/// Mutilated model: every target loses its incoming edges and becomes a
/// point mass at its assigned value. Throws UnknownTarget.
LinearScm apply_do(const LinearScm& scm, const InterventionSpec& spec);

struct PosetEntry {
  InterventionSpec spec;
  GaussianDist dist;
};

/// Interventional distributions indexed by intervention, with the
/// refinement order materialized: `leq(a, b)` is true iff entry a ≤ entry b.
class DistributionPoset {
 public:
  DistributionPoset(std::vector<PosetEntry> entries);

  const std::vector<PosetEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool leq(std::size_t a, std::size_t b) const { return order_.at(a).at(b); }
  /// nullptr when the spec is not indexed.
  const GaussianDist* find(const InterventionSpec& spec) const;
  const GaussianDist& observational() const;

 private:
  std::vector<PosetEntry> entries_;
  std::vector<std::vector<bool>> order_;
};

DistributionPoset implied_poset(const LinearScm& scm, const InterventionSet& iset,
                                unsigned workers = 1);

}  // namespace percept
