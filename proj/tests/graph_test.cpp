#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "percept/errors.hpp"
#include "percept/graph.hpp"
#include "test_support.hpp"

namespace percept {
namespace {

CausalGraph admissions_r1() {
  return CausalGraph::build({"Z", "X1", "X2", "Y"},
                            {{"Z", "X1"}, {"Z", "X2"}, {"X2", "X1"}, {"X1", "Y"}, {"X2", "Y"}});
}

CausalGraph admissions_r2() {
  return CausalGraph::build({"Z", "X1", "X2", "Y"},
                            {{"Z", "X2"}, {"X2", "X1"}, {"X1", "Y"}, {"X2", "Y"}});
}

// Path-enumeration oracle: walk every simple path of the skeleton and
// apply the chain / fork / collider blocking rules directly.
bool d_separated_by_paths(const CausalGraph& g, std::size_t a, std::size_t b,
                          const std::set<std::size_t>& given) {
  const std::size_t p = g.size();
  std::vector<std::vector<bool>> desc_or_self(p);
  for (std::size_t i = 0; i < p; ++i) {
    desc_or_self[i] = g.descendants(i);
    desc_or_self[i][i] = true;
  }
  auto collider_open = [&](std::size_t m) {
    for (std::size_t z : given)
      if (desc_or_self[m][z]) return true;
    return false;
  };

  std::vector<std::size_t> path{a};
  std::vector<bool> on_path(p, false);
  on_path[a] = true;
  std::function<bool(std::size_t)> open_path_exists = [&](std::size_t cur) -> bool {
    if (cur == b) {
      for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        std::size_t prev = path[k - 1], m = path[k], next = path[k + 1];
        bool collider = g.has_edge(prev, m) && g.has_edge(next, m);
        if (collider ? !collider_open(m) : given.count(m) > 0) return false;
      }
      return true;
    }
    std::vector<std::size_t> nbrs(g.parents(cur).begin(), g.parents(cur).end());
    nbrs.insert(nbrs.end(), g.children(cur).begin(), g.children(cur).end());
    for (std::size_t n : nbrs) {
      if (on_path[n]) continue;
      on_path[n] = true;
      path.push_back(n);
      bool found = open_path_exists(n);
      path.pop_back();
      on_path[n] = false;
      if (found) return true;
    }
    return false;
  };
  return !open_path_exists(a);
}

TEST(CausalGraph, BuildsAdmissionsGraph) {
  auto g = admissions_r1();
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edge_count(), 5u);
  EXPECT_TRUE(g.has_edge(g.index_of("Z"), g.index_of("X1")));
  EXPECT_FALSE(g.has_edge(g.index_of("X1"), g.index_of("Z")));
}

TEST(CausalGraph, SingleNodeWithoutEdges) {
  auto g = CausalGraph::build({"A"}, {});
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(CausalGraph, TwoCycleIsRejected) {
  EXPECT_THROW(CausalGraph::build({"A", "B"}, {{"A", "B"}, {"B", "A"}}), CycleError);
}

TEST(CausalGraph, CycleMessageNamesTheCycle) {
  try {
    CausalGraph::build({"A", "B", "C", "D"}, {{"D", "A"}, {"A", "B"}, {"B", "C"}, {"C", "A"}});
    FAIL() << "expected CycleError";
  } catch (const CycleError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("A -> B -> C -> A"), std::string::npos) << msg;
  }
}

TEST(CausalGraph, RejectsBadInput) {
  EXPECT_THROW(CausalGraph::build({"A", "A"}, {}), DuplicateNode);
  EXPECT_THROW(CausalGraph::build({"A"}, {{"A", "B"}}), UnknownEndpoint);
  EXPECT_THROW(CausalGraph::build({"A"}, {{"A", "A"}}), CycleError);
  EXPECT_THROW(CausalGraph::build({""}, {}), ValidationError);
}

TEST(CausalGraph, RebuildFromOwnPartsIsIdentical) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto scm = testing::random_scm(rng, 1 + t % 8);
    const auto& g = scm.graph();
    auto again = CausalGraph::build(g.nodes(), g.edge_names());
    EXPECT_TRUE(again == g);
    EXPECT_EQ(again.nodes(), g.nodes());
    EXPECT_EQ(again.edge_names(), g.edge_names());
  }
}

TEST(CausalGraph, EqualityIsLabeled) {
  auto a = CausalGraph::build({"A", "B"}, {{"A", "B"}});
  auto b = CausalGraph::build({"B", "A"}, {{"A", "B"}});
  auto c = CausalGraph::build({"A", "B"}, {{"B", "A"}});
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_FALSE(admissions_r1() == admissions_r2());
}

TEST(TopologicalOrder, Admissions) {
  EXPECT_EQ(topological_order(admissions_r1()), (std::vector<std::string>{"Z", "X2", "X1", "Y"}));
}

TEST(TopologicalOrder, ChainAndDisconnected) {
  auto chain = CausalGraph::build({"C", "B", "A"}, {{"A", "B"}, {"B", "C"}});
  EXPECT_EQ(topological_order(chain), (std::vector<std::string>{"A", "B", "C"}));
  auto loose = CausalGraph::build({"A", "B"}, {});
  EXPECT_EQ(topological_order(loose), (std::vector<std::string>{"A", "B"}));
}

TEST(TopologicalOrder, ParentsPrecedeChildrenOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    auto scm = testing::random_scm(rng, 1 + t % 9);
    const auto& g = scm.graph();
    std::vector<std::size_t> pos(g.size());
    const auto& topo = g.topological_order();
    for (std::size_t k = 0; k < topo.size(); ++k) pos[topo[k]] = k;
    for (auto [f, c] : g.edges()) EXPECT_LT(pos[f], pos[c]);
  }
}

TEST(Factorize, AdmissionsStrings) {
  auto r1 = admissions_r1();
  auto r2 = admissions_r2();
  EXPECT_EQ(render_factorization(r1, factorize(r1)), "P(Y|X1,X2)·P(X2|Z)·P(X1|X2,Z)·P(Z)");
  EXPECT_EQ(render_factorization(r2, factorize(r2)), "P(Y|X1,X2)·P(X2|Z)·P(X1|X2)·P(Z)");
}

TEST(Factorize, TermsFollowReverseTopologicalOrder) {
  auto terms = factorize(admissions_r1());
  ASSERT_EQ(terms.size(), 4u);
  EXPECT_EQ(terms[0].child, "Y");
  EXPECT_EQ(terms[1].child, "X1");
  EXPECT_EQ(terms[1].parents, (std::vector<std::string>{"Z", "X2"}));
  EXPECT_EQ(terms[3].child, "Z");
  EXPECT_TRUE(terms[3].parents.empty());
}

TEST(Factorize, EdgelessGraph) {
  auto g = CausalGraph::build({"A", "B"}, {});
  EXPECT_EQ(render_factorization(g, factorize(g)), "P(B)·P(A)");
}

TEST(Factorize, OneTermPerNodeWithGraphParents) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto scm = testing::random_scm(rng, 1 + t % 8);
    const auto& g = scm.graph();
    auto terms = factorize(g);
    ASSERT_EQ(terms.size(), g.size());
    std::set<std::string> children;
    for (const auto& term : terms) {
      children.insert(term.child);
      std::vector<std::string> expected;
      for (std::size_t p : g.parents(g.index_of(term.child))) expected.push_back(g.name(p));
      EXPECT_EQ(term.parents, expected);
    }
    EXPECT_EQ(children, std::set<std::string>(g.nodes().begin(), g.nodes().end()));
  }
}

TEST(DSeparation, AdmissionsStatements) {
  EXPECT_TRUE(d_separated(admissions_r2(), {"X1"}, {"Z"}, {"X2"}));
  EXPECT_FALSE(d_separated(admissions_r1(), {"X1"}, {"Z"}, {"X2"}));
}

TEST(DSeparation, DirectEdgeNeverBlocked) {
  auto g = admissions_r1();
  for (auto [f, c] : g.edge_names()) EXPECT_FALSE(d_separated(g, {c}, {f}, {}));
}

TEST(DSeparation, ColliderOpensWhenDescendantObserved) {
  auto g = CausalGraph::build({"A", "B", "C", "D"}, {{"A", "C"}, {"B", "C"}, {"C", "D"}});
  EXPECT_TRUE(d_separated(g, {"A"}, {"B"}, {}));
  EXPECT_FALSE(d_separated(g, {"A"}, {"B"}, {"C"}));
  EXPECT_FALSE(d_separated(g, {"A"}, {"B"}, {"D"}));
}

TEST(DSeparation, Errors) {
  auto g = admissions_r1();
  EXPECT_THROW(d_separated(g, {"Q"}, {"Z"}, {}), UnknownNode);
  EXPECT_THROW(d_separated(g, {"X1"}, {"X1"}, {}), OverlappingSets);
  EXPECT_THROW(d_separated(g, {"X1"}, {"Z"}, {"Z"}), OverlappingSets);
}

TEST(DSeparation, MatchesPathEnumerationAndIsSymmetric) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    auto scm = testing::random_scm(rng, 2 + t % 6, 0.4);
    const auto& g = scm.graph();
    const std::size_t p = g.size();
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) {
        if (a == b) continue;
        for (std::uint32_t mask = 0; mask < (1U << p); ++mask) {
          if (mask >> a & 1U || mask >> b & 1U) continue;
          std::vector<std::size_t> given;
          for (std::size_t k = 0; k < p; ++k)
            if (mask >> k & 1U) given.push_back(k);
          bool fast = d_separated(g, std::vector<std::size_t>{a}, std::vector<std::size_t>{b}, given);
          bool swapped = d_separated(g, std::vector<std::size_t>{b}, std::vector<std::size_t>{a}, given);
          bool slow = d_separated_by_paths(g, a, b, std::set<std::size_t>(given.begin(), given.end()));
          ASSERT_EQ(fast, slow) << "graph " << t << " pair " << a << "," << b << " mask " << mask;
          ASSERT_EQ(fast, swapped);
          ++checked;
        }
      }
  }
  EXPECT_GT(checked, 1000);
}

}  // namespace
}  // namespace percept
