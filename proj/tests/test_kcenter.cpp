#include <gtest/gtest.h>

#include "narlab/kcenter.hpp"
#include "oracles.hpp"

using namespace narlab;

TEST(AllPairs, MatchesPerSourceDijkstra) {
  RandomSource rng(5);
  auto g = er_graph(12, 0.3, rng);
  auto d = all_pairs_distances(g);
  for (NodeId s = 0; s < 12; ++s) {
    auto ref = oracle::dijkstra_plain(g, s);
    for (NodeId t = 0; t < 12; ++t) EXPECT_NEAR(d(s, t), ref[t], 1e-12);
  }
}

TEST(Objective, PathWithMiddleCenter) {
  auto g = path_graph({1.0, 1.0, 1.0, 1.0});
  EXPECT_EQ(kcenter_objective(g, {2}), 2.0);
  EXPECT_EQ(kcenter_objective(g, {1, 3}), 1.0);
  EXPECT_THROW(kcenter_objective(g, {}), Error);
}

TEST(Gon, FarthestPointOnPath) {
  auto g = path_graph({1.0, 1.0, 1.0, 1.0});
  auto c = gon(g, 2, 0);
  EXPECT_EQ(c.centers, (std::vector<NodeId>{0, 4}));
  EXPECT_EQ(c.objective, 2.0);
}

TEST(Gon, RejectsBadK) {
  auto g = path_graph({1.0});
  EXPECT_THROW(gon(g, 0), Error);
  EXPECT_THROW(gon(g, 3), Error);
}

TEST(Gon, WithinTwiceOptimum) {
  RandomSource rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = er_graph(10, 0.5, rng);
    const auto dist = all_pairs_distances(g);
    bool connected = true;
    for (double x : dist.data()) connected = connected && std::isfinite(x);
    if (!connected) continue;
    for (int k : {2, 3}) {
      const double opt = oracle::kcenter_exhaustive(dist, k);
      EXPECT_EQ(brute_force_kcenter(g, k).objective, opt);
      for (NodeId first : {0, 4, 9}) EXPECT_LE(gon(g, k, first).objective, 2.0 * opt + 1e-12);
    }
  }
}

TEST(BruteForce, TooManySubsets) {
  RandomSource rng(1);
  auto g = er_graph(40, 0.1, rng);
  try {
    brute_force_kcenter(g, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(TopK, TiesGoToSmallerIds) {
  EXPECT_EQ(topk_centers({0.5, 0.9, 0.5, 0.5}, 2), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(topk_centers({1.0, 1.0, 1.0}, 2), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(topk_centers({0.1, 0.2, 0.3}, 0), std::vector<NodeId>{});
}

TEST(TopK, RejectsNanAndOversizedK) {
  EXPECT_THROW(topk_centers({0.1, std::nan("")}, 1), Error);
  EXPECT_THROW(topk_centers({0.1}, 2), Error);
}

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(5, 2), 10.0);
  EXPECT_EQ(binomial(12, 3), 220.0);
  EXPECT_EQ(binomial(3, 4), 0.0);
}
