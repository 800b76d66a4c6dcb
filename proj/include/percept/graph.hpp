#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace percept {

using NamePair = std::pair<std::string, std::string>;

/// Node-labeled directed acyclic graph.
///
/// Nodes keep their declaration order, which is used to break ties
/// wherever an ordering is produced (topological order, factorization
/// rendering, reports). Instances are immutable once built.
class CausalGraph {
 public:
  /// Validates names and edges and rejects cycles.
  /// Throws DuplicateNode, UnknownEndpoint or CycleError (the message
  /// spells out one cycle, e.g. "A -> B -> A").
  static CausalGraph build(std::vector<std::string> nodes,
                           const std::vector<NamePair>& edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::string& name(std::size_t i) const { return nodes_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownNode.
  std::size_t index_of(std::string_view name) const;

  // Adjacency lists are sorted by declaration index.
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_.at(i); }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_.at(i); }

  bool has_edge(std::size_t parent, std::size_t child) const;
  std::size_t edge_count() const noexcept { return edge_count_; }

  /// Edges as (parent, child) index pairs sorted by (parent, child).
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  /// Same edges by name, same ordering.
  std::vector<NamePair> edge_names() const;

  /// Parents precede children; ties go to the earlier-declared node.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }
  std::vector<std::string> topological_names() const;

  /// All nodes reachable from `i` along directed edges, excluding `i`.
  std::vector<bool> descendants(std::size_t i) const;

  /// Labeled comparison: same node-name set and same edge-name set,
  /// regardless of declaration order.
  friend bool operator==(const CausalGraph& a, const CausalGraph& b);

 private:
  CausalGraph() = default;

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> topo_;
  std::size_t edge_count_ = 0;
};

inline std::vector<std::string> topological_order(const CausalGraph& g) {
  return g.topological_names();
}

/// One factor P(child | parents) of the Markov factorization.
struct FactorTerm {
  std::string child;
  std::vector<std::string> parents;  // declaration order

  friend bool operator==(const FactorTerm&, const FactorTerm&) = default;
};

/// Terms in reverse topological order, one per node.
using FactorizationTerms = std::vector<FactorTerm>;

FactorizationTerms factorize(const CausalGraph& g);

/// Renders the factorization as "P(Y|X1,X2)·P(X2|Z)·P(Z)".
///
/// Terms are listed by descending declaration index of the child and
/// parents are sorted by name, so the string does not depend on which
/// topological order produced `terms`.
std::string render_factorization(const CausalGraph& g, const FactorizationTerms& terms,
                                 std::string_view separator = "·");

/// Whether every path between `a` and `b` is blocked by `given`
/// (reachability / Bayes-ball). Empty `a` or `b` is trivially separated.
/// Throws UnknownNode or OverlappingSets.
bool d_separated(const CausalGraph& g, const std::vector<std::string>& a,
                 const std::vector<std::string>& b, const std::vector<std::string>& given);

/// Index-based overload; no validation beyond bounds.
bool d_separated(const CausalGraph& g, const std::vector<std::size_t>& a,
                 const std::vector<std::size_t>& b, const std::vector<std::size_t>& given);

}  // namespace percept
