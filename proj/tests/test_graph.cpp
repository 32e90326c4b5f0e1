#include <gtest/gtest.h>

#include <set>

#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"

using namespace narlab;

namespace {

std::size_t undirected_edges(const GraphInstance& g) { return g.edge_count() / 2; }

}  // namespace

TEST(ErGraph, EmptyAtPZero) {
  RandomSource rng(1);
  auto g = er_graph(4, 0.0, rng);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(ErGraph, CompleteAtPOne) {
  RandomSource rng(1);
  auto g = er_graph(4, 1.0, rng);
  EXPECT_EQ(g.edge_count(), 12u);
  EXPECT_TRUE(g.is_symmetric());
}

TEST(ErGraph, RejectsBadProbability) {
  RandomSource rng(1);
  try {
    er_graph(4, 1.5, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(ErGraph, SameSeedSameGraph) {
  RandomSource a(42), b(42);
  EXPECT_EQ(er_graph(20, 0.3, a), er_graph(20, 0.3, b));
}

TEST(ErGraph, RescaledWeightsSpanUnitInterval) {
  RandomSource rng(3);
  auto g = er_graph(20, 0.5, rng, true);
  auto [lo, hi] = std::minmax_element(g.weights().begin(), g.weights().end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 1.0);
}

TEST(ErGraph, EdgeDensityNearP) {
  RandomSource rng(5);
  std::size_t total = 0;
  const int trials = 50;
  for (int i = 0; i < trials; ++i) total += undirected_edges(er_graph(30, 0.2, rng));
  const double mean = static_cast<double>(total) / trials;
  EXPECT_NEAR(mean, 0.2 * 435, 10.0);
}

TEST(TwoCommunity, DisjointTrianglesWithoutCrossEdges) {
  RandomSource rng(9);
  auto g = two_community_graph(6, rng, {1.0, 0.0});
  EXPECT_EQ(undirected_edges(g), 6u);
  for (const auto& e : g.edges()) EXPECT_EQ(e.head < 3, e.tail < 3);
  ASSERT_TRUE(g.capacities());
  for (double c : *g.capacities()) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(TwoCommunity, RejectsOddN) {
  RandomSource rng(9);
  EXPECT_THROW(two_community_graph(7, rng), Error);
}

TEST(Bipartite, CompleteK22) {
  RandomSource rng(2);
  auto g = bipartite_graph(2, 2, 1.0, rng, true);
  EXPECT_EQ(undirected_edges(g), 4u);
  for (const auto& e : g.edges()) EXPECT_NE(e.head < 2, e.tail < 2);
  for (double c : *g.capacities()) EXPECT_EQ(c, 1.0);
}

TEST(Bipartite, CapacitiesAreZeroOrOne) {
  RandomSource rng(2);
  auto g = bipartite_graph(8, 8, 0.7, rng);
  for (double c : *g.capacities()) EXPECT_TRUE(c == 0.0 || c == 1.0);
}

TEST(Euclidean, CollinearPoints) {
  auto g = euclidean_clique_from_points({{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}});
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(g.weight(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(g.weight(0, 2), 1.0);
  EXPECT_TRUE(g.is_symmetric());
}

TEST(Euclidean, TriangleInequalityHolds) {
  RandomSource rng(11);
  auto g = euclidean_clique(10, rng);
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b)
      for (int c = 0; c < 10; ++c)
        if (a != b && b != c && a != c) EXPECT_LE(g.weight(a, c), g.weight(a, b) + g.weight(b, c) + 1e-15);
}

TEST(ReachablePair, IsolatedNodesHaveNoPair) {
  RandomSource rng(1);
  GraphInstance g(2, {}, {});
  try {
    reachable_pair(g, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoConnectedPair);
  }
}

TEST(ReachablePair, FindsTheOnlyPair) {
  RandomSource rng(1);
  GraphInstance g(5, {{3, 1}}, {1.0});
  auto [s, t] = reachable_pair(g, rng);
  EXPECT_EQ(s, 3);
  EXPECT_EQ(t, 1);
}

TEST(GraphInstance, RejectsSelfLoopAndDuplicates) {
  EXPECT_THROW(GraphInstance(2, {{0, 0}}, {1.0}), Error);
  EXPECT_THROW(GraphInstance(2, {{0, 1}, {0, 1}}, {1.0, 2.0}), Error);
  EXPECT_THROW(GraphInstance(2, {{0, 1}}, {1.0, 2.0}), Error);
  EXPECT_THROW(GraphInstance(2, {{0, 1}}, {1.0}, std::vector<double>{-1.0}), Error);
}

TEST(GraphInstance, WeightMatrixLayout) {
  GraphInstance g(3, {{0, 1}, {1, 2}}, {2.0, 3.0});
  auto w = g.weight_matrix();
  EXPECT_EQ(w(0, 1), 2.0);
  EXPECT_EQ(w(1, 2), 3.0);
  EXPECT_EQ(w(0, 0), 0.0);
  EXPECT_EQ(w(2, 0), kInf);
}

TEST(GraphJson, RoundTripWithCapacitiesAndPoints) {
  RandomSource rng(4);
  auto g = two_community_graph(8, rng);
  EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
  auto e = euclidean_clique(5, rng);
  EXPECT_EQ(graph_from_json(graph_to_json(e)), e);
}

TEST(GraphJson, MalformedInputIsSchemaMismatch) {
  try {
    graph_from_json(Json::parse(R"({"n":2,"edges":[[0]],"weights":[]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

TEST(RandomSource, DerivedStreamsDiffer) {
  RandomSource root(7);
  auto a = root.derive(0), b = root.derive(1);
  EXPECT_NE(a.next_u64(), b.next_u64());
  RandomSource r(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(r.below(10));
  EXPECT_EQ(seen.size(), 10u);
}
