#include "percept/graph.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>
#include <sstream>

#include "percept/errors.hpp"

namespace percept {

namespace {

// Returns one directed cycle among the nodes Kahn's algorithm could not
// schedule. Every such node has at least one unscheduled parent, so
// walking parents must revisit a node.
std::vector<std::size_t> find_cycle(const std::vector<std::vector<std::size_t>>& parents,
                                    const std::vector<bool>& scheduled) {
  std::size_t start = 0;
  while (scheduled[start]) ++start;

  std::vector<std::size_t> walk;
  std::vector<std::size_t> seen_at(parents.size(), SIZE_MAX);
  std::size_t cur = start;
  while (seen_at[cur] == SIZE_MAX) {
    seen_at[cur] = walk.size();
    walk.push_back(cur);
    for (std::size_t p : parents[cur]) {
      if (!scheduled[p]) {
        cur = p;
        break;
      }
    }
  }
  // walk[seen_at[cur]..] is the cycle traversed child -> parent.
  std::vector<std::size_t> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[cur]),
                                 walk.end());
  std::reverse(cycle.begin(), cycle.end());
  // start at the earliest declared node so messages are canonical
  std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  return cycle;
}

}  // namespace

CausalGraph CausalGraph::build(std::vector<std::string> nodes,
                               const std::vector<NamePair>& edges) {
  CausalGraph g;
  g.nodes_ = std::move(nodes);
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    const auto& n = g.nodes_[i];
    if (n.empty()) throw ValidationError("node names must be non-empty");
    if (!g.index_.emplace(n, i).second) throw DuplicateNode("duplicate node '" + n + "'");
  }

  const std::size_t p = g.nodes_.size();
  g.parents_.assign(p, {});
  g.children_.assign(p, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [from, to] : edges) {
    auto f = g.find(from);
    auto t = g.find(to);
    if (!f) throw UnknownEndpoint("edge " + from + " -> " + to + ": unknown node '" + from + "'");
    if (!t) throw UnknownEndpoint("edge " + from + " -> " + to + ": unknown node '" + to + "'");
    if (*f == *t) throw CycleError("self-loop " + from + " -> " + to);
    if (!seen.emplace(*f, *t).second) continue;
    g.parents_[*t].push_back(*f);
    g.children_[*f].push_back(*t);
  }
  for (auto& v : g.parents_) std::sort(v.begin(), v.end());
  for (auto& v : g.children_) std::sort(v.begin(), v.end());
  g.edge_count_ = seen.size();

  // Kahn's algorithm with a min-heap on declaration index.
  std::vector<std::size_t> indegree(p);
  for (std::size_t i = 0; i < p; ++i) indegree[i] = g.parents_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < p; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<bool> scheduled(p, false);
  while (!ready.empty()) {
    std::size_t n = ready.top();
    ready.pop();
    scheduled[n] = true;
    g.topo_.push_back(n);
    for (std::size_t c : g.children_[n])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (g.topo_.size() != p) {
    auto cycle = find_cycle(g.parents_, scheduled);
    std::ostringstream msg;
    msg << "graph has a cycle: ";
    for (std::size_t n : cycle) msg << g.nodes_[n] << " -> ";
    msg << g.nodes_[cycle.front()];
    throw CycleError(msg.str());
  }
  return g;
}

std::optional<std::size_t> CausalGraph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CausalGraph::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UnknownNode("unknown node '" + std::string(name) + "'");
}

bool CausalGraph::has_edge(std::size_t parent, std::size_t child) const {
  const auto& ps = parents_.at(child);
  return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<std::pair<std::size_t, std::size_t>> CausalGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count_);
  for (std::size_t f = 0; f < size(); ++f)
    for (std::size_t t : children_[f]) out.emplace_back(f, t);
  return out;
}

std::vector<NamePair> CausalGraph::edge_names() const {
  std::vector<NamePair> out;
  out.reserve(edge_count_);
  for (auto [f, t] : edges()) out.emplace_back(nodes_[f], nodes_[t]);
  return out;
}

std::vector<std::string> CausalGraph::topological_names() const {
  std::vector<std::string> out;
  out.reserve(topo_.size());
  for (std::size_t i : topo_) out.push_back(nodes_[i]);
  return out;
}

std::vector<bool> CausalGraph::descendants(std::size_t i) const {
  std::vector<bool> mark(size(), false);
  std::vector<std::size_t> stack(children_.at(i).begin(), children_.at(i).end());
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    if (mark[n]) continue;
    mark[n] = true;
    for (std::size_t c : children_[n]) stack.push_back(c);
  }
  return mark;
}

bool operator==(const CausalGraph& a, const CausalGraph& b) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count()) return false;
  std::set<std::string> na(a.nodes_.begin(), a.nodes_.end());
  std::set<std::string> nb(b.nodes_.begin(), b.nodes_.end());
  if (na != nb) return false;
  auto ea = a.edge_names();
  auto eb = b.edge_names();
  return std::set<NamePair>(ea.begin(), ea.end()) == std::set<NamePair>(eb.begin(), eb.end());
}

FactorizationTerms factorize(const CausalGraph& g) {
  FactorizationTerms terms;
  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    FactorTerm t{g.name(*it), {}};
    for (std::size_t p : g.parents(*it)) t.parents.push_back(g.name(p));
    terms.push_back(std::move(t));
  }
  return terms;
}

std::string render_factorization(const CausalGraph& g, const FactorizationTerms& terms,
                                 std::string_view separator) {
  std::vector<const FactorTerm*> order;
  for (const auto& t : terms) order.push_back(&t);
  std::sort(order.begin(), order.end(), [&](const FactorTerm* x, const FactorTerm* y) {
    return g.index_of(x->child) > g.index_of(y->child);
  });

  std::string out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) out += separator;
    out += "P(" + order[k]->child;
    auto parents = order[k]->parents;
    std::sort(parents.begin(), parents.end());
    for (std::size_t j = 0; j < parents.size(); ++j) out += (j ? "," : "|") + parents[j];
    out += ")";
  }
  return out;
}

bool d_separated(const CausalGraph& g, const std::vector<std::size_t>& a,
                 const std::vector<std::size_t>& b, const std::vector<std::size_t>& given) {
  const std::size_t p = g.size();
  std::vector<bool> observed(p, false);
  for (std::size_t z : given) observed.at(z) = true;

  // Ancestors of the conditioning set, itself included: a collider is
  // open exactly when it lies in this set.
  std::vector<bool> anc(p, false);
  std::vector<std::size_t> stack(given.begin(), given.end());
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    if (anc[n]) continue;
    anc[n] = true;
    for (std::size_t q : g.parents(n)) stack.push_back(q);
  }

  std::vector<bool> target(p, false);
  for (std::size_t y : b) target.at(y) = true;

  // Traversal state: node plus whether we arrived from a child (moving
  // up) or from a parent (moving down).
  enum Dir : int { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> visited(p, {false, false});
  std::vector<std::pair<std::size_t, Dir>> queue;
  for (std::size_t x : a) queue.emplace_back(x, kUp);
  while (!queue.empty()) {
    auto [n, dir] = queue.back();
    queue.pop_back();
    if (visited[n][dir]) continue;
    visited[n][dir] = true;
    if (!observed[n] && target[n]) return false;

    if (dir == kUp && !observed[n]) {
      for (std::size_t q : g.parents(n)) queue.emplace_back(q, kUp);
      for (std::size_t c : g.children(n)) queue.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!observed[n])
        for (std::size_t c : g.children(n)) queue.emplace_back(c, kDown);
      if (anc[n])
        for (std::size_t q : g.parents(n)) queue.emplace_back(q, kUp);
    }
  }
  return true;
}

bool d_separated(const CausalGraph& g, const std::vector<std::string>& a,
                 const std::vector<std::string>& b, const std::vector<std::string>& given) {
  auto resolve = [&](const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    for (const auto& n : names) out.push_back(g.index_of(n));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto ia = resolve(a), ib = resolve(b), ic = resolve(given);
  auto overlaps = [](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    std::vector<std::size_t> both;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
    return !both.empty();
  };
  if (overlaps(ia, ib) || overlaps(ia, ic) || overlaps(ib, ic))
    throw OverlappingSets("d-separation query sets must be pairwise disjoint");
  return d_separated(g, ia, ib, ic);
}

}  // namespace percept
