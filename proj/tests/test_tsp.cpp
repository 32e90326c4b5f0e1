#include <gtest/gtest.h>

#include <numeric>

#include "narlab/tsp.hpp"
#include "oracles.hpp"

using namespace narlab;

namespace {

PointerMatrix one_hot(const std::vector<NodeId>& order) {
  const auto n = order.size();
  PointerMatrix p(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p(order[i], order[(i + 1) % n]) = 1.0;
  return p;
}

}  // namespace

TEST(Tour, ValidityChecks) {
  EXPECT_TRUE(is_valid_tour(3, {2, 0, 1}));
  EXPECT_FALSE(is_valid_tour(3, {0, 0, 1}));
  EXPECT_FALSE(is_valid_tour(3, {0, 1}));
  EXPECT_FALSE(is_valid_tour(3, {0, 1, 3}));
}

TEST(Tour, UnitSquareCost) {
  auto g = euclidean_clique_from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_DOUBLE_EQ(tour_cost(clique_distances(g), {0, 1, 2, 3}), 4.0);
  EXPECT_DOUBLE_EQ(held_karp(g).cost, 4.0);
}

TEST(Tour, IncompleteGraphRejected) {
  GraphInstance g(3, {{0, 1}, {1, 0}}, {1.0, 1.0});
  EXPECT_THROW(clique_distances(g), Error);
}

TEST(Matching, MatchesExhaustivePairings) {
  RandomSource rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = euclidean_clique(10, rng);
    auto w = clique_distances(g);
    std::vector<NodeId> nodes{0, 2, 3, 5, 7, 9};
    auto m = min_weight_perfect_matching(nodes, w);
    double total = 0.0;
    std::vector<int> seen(10, 0);
    for (auto [a, b] : m) {
      total += w(a, b);
      ++seen[a];
      ++seen[b];
    }
    for (NodeId v : nodes) EXPECT_EQ(seen[v], 1);
    EXPECT_NEAR(total, oracle::perfect_matching_exhaustive(nodes, w), 1e-12);
  }
}

TEST(Matching, OddAndOversizedSets) {
  RealMatrix w(30, 30, 1.0);
  try {
    min_weight_perfect_matching({0, 1, 2}, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOddSet);
  }
  std::vector<NodeId> many(22);
  std::iota(many.begin(), many.end(), 0);
  try {
    min_weight_perfect_matching(many, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSetTooLarge);
  }
}

TEST(Euler, CircuitUsesEveryEdgeOnce) {
  std::vector<NodePair> edges{{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}};
  auto walk = eulerian_circuit(5, edges);
  EXPECT_EQ(walk.nodes.front(), walk.nodes.back());
  EXPECT_EQ(walk.edges.size(), edges.size());
  std::vector<std::size_t> sorted = walk.edges;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Euler, OddDegreeAndDisconnected) {
  try {
    eulerian_circuit(3, {{0, 1}, {1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOddDegree);
  }
  try {
    eulerian_circuit(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisconnected);
  }
}

TEST(HeldKarp, MatchesPermutationSearch) {
  RandomSource rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    auto g = euclidean_clique(8, rng);
    auto t = held_karp(g);
    EXPECT_TRUE(is_valid_tour(8, t.order));
    EXPECT_NEAR(t.cost, oracle::best_tour_exhaustive(clique_distances(g)), 1e-12);
    EXPECT_NEAR(t.cost, tour_cost(clique_distances(g), t.order), 1e-12);
  }
}

TEST(HeldKarp, TooLarge) {
  RandomSource rng(1);
  try {
    held_karp(euclidean_clique(17, rng));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(Christofides, WithinHalfAgainOfOptimum) {
  RandomSource rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = euclidean_clique(9, rng);
    auto res = christofides(g);
    EXPECT_FALSE(res.greedy_matching);
    EXPECT_TRUE(is_valid_tour(9, res.tour.order));
    EXPECT_EQ(res.tree.size(), 8u);
    EXPECT_LE(res.tour.cost, 1.5 * oracle::best_tour_exhaustive(clique_distances(g)) + 1e-12);
  }
}

TEST(NearestNeighbour, ValidTour) {
  RandomSource rng(4);
  auto g = euclidean_clique(12, rng);
  auto t = nearest_neighbour_tour(g);
  EXPECT_TRUE(is_valid_tour(12, t.order));
  EXPECT_EQ(t.order.front(), 0);
}

TEST(Beam, OneHotDecodesExactly) {
  std::vector<NodeId> order{0, 3, 1, 4, 2};
  for (std::size_t width : {1u, 3u}) {
    BeamOptions opts;
    opts.width = width;
    EXPECT_EQ(beam_search_tour(one_hot(order), opts).order, order);
  }
}

TEST(Beam, UniformScoresGiveLexicographicTour) {
  BeamOptions opts;
  opts.width = 4;
  EXPECT_EQ(beam_search_tour(PointerMatrix(4, 4, 0.0), opts).order, (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(Beam, DistanceTieBreak) {
  // Both directions of the square are equally likely; cost breaks nothing,
  // so the lexicographically smaller sequence wins.
  auto g = euclidean_clique_from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  PointerMatrix p(4, 4, 0.0);
  for (int i = 0; i < 4; ++i) {
    p(i, (i + 1) % 4) = 1.0;
    p(i, (i + 3) % 4) = 1.0;
  }
  BeamOptions opts;
  opts.width = 8;
  opts.distances = clique_distances(g);
  auto t = beam_search_tour(p, opts);
  EXPECT_EQ(t.order, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(t.cost, 4.0);
}

TEST(Beam, FuzzedScoresAlwaysYieldTours) {
  RandomSource rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(2 + rng.below(9));
    PointerMatrix p(n, n);
    for (auto& x : p.data()) x = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 5.0);
    BeamOptions opts;
    opts.width = 1 + rng.below(5);
    opts.multi_start = rng.bernoulli(0.3);
    EXPECT_TRUE(is_valid_tour(n, beam_search_tour(p, opts).order));
  }
}

TEST(Beam, RejectsNegativeScores) {
  PointerMatrix p(2, 2, 0.5);
  p(0, 1) = -1.0;
  EXPECT_THROW(beam_search_tour(p, {}), Error);
}

TEST(PointerJson, RoundTrip) {
  auto p = one_hot({0, 2, 1});
  EXPECT_EQ(pointers_from_json(Json::parse(pointers_to_json(p).dump())), p);
  EXPECT_THROW(pointers_from_json(Json::parse(R"({"n":2,"rows":[1]})")), Error);
}

TEST(Gap, Definition) {
  EXPECT_NEAR(optimality_gap_co(11.0, 10.0), 0.1, 1e-15);
  EXPECT_THROW(optimality_gap_co(1.0, 0.0), Error);
}
