#include <gtest/gtest.h>

#include <cmath>

#include "narlab/closed_form.hpp"

using namespace narlab;

namespace {

const double kHSweep[] = {0.8, 0.4, 0.2, 0.1, 0.05, 0.02};

// s -> a -> b with weights 2 and 3, stored undirected.
GraphInstance two_edge_path() { return path_graph({2.0, 3.0}); }

}  // namespace

TEST(ReluMlp, RejectsLayersThatDoNotChain) {
  DenseLayer a{RealMatrix(2, 1, 1.0), {0.0, 0.0}, true};
  DenseLayer b{RealMatrix(1, 3, 1.0), {0.0}, true};
  EXPECT_THROW(ReluMlp({a, b}), Error);
}

TEST(ReluMlp, ZeroWeightIgnoresInfiniteInput) {
  ReluMlp m({ReluMlp::scalar_layer(0.0, 2.0, false)});
  const double x = kInf;
  EXPECT_EQ(mlp_forward(m, std::span<const double>(&x, 1))[0], 2.0);
}

TEST(GinStep, RejectsSelfLoopsAndBadShapes) {
  RealMatrix a(2, 2, 0.0);
  a(0, 0) = 1.0;
  EXPECT_THROW(gin_step(a, RealMatrix(2, 1, 0.0), 0.0, ReluMlp::identity()), Error);
  EXPECT_THROW(gin_step(RealMatrix(2, 2, 0.0), RealMatrix(3, 1, 0.0), 0.0, ReluMlp::identity()), Error);
}

TEST(GinStep, SumsNeighboursAndScaledSelf) {
  RealMatrix a(2, 2, std::vector<double>{0.0, 1.0, 1.0, 0.0});
  RealMatrix h(2, 1, std::vector<double>{2.0, 5.0});
  auto out = gin_step(a, h, 0.5, ReluMlp::identity());
  EXPECT_EQ(out(0, 0), 1.5 * 2.0 + 5.0);
  EXPECT_EQ(out(1, 0), 1.5 * 5.0 + 2.0);
}

TEST(Reachability, ExactIndicatorForEveryH) {
  RandomSource rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = er_graph(12, 0.2, rng);
    for (double h : kHSweep)
      for (int k : {1, 2, 4}) {
        auto net = build_reachability_net(h, k);
        EXPECT_EQ(net.forward(g, 0), net.oracle(g, 0));
      }
  }
}

TEST(Reachability, OracleIsKHopNeighbourhood) {
  auto g = path_graph({1, 1, 1, 1});
  auto net = build_reachability_net(0.1, 2);
  EXPECT_EQ(net.oracle(g, 0), (RealVec{1, 1, 1, 0, 0}));
}

TEST(WeightedSssp, TwoEdgePathHasExactLogBias) {
  for (double h : {0.2, 0.05, 0.02}) {
    auto net = build_weighted_sssp_net(h, 2);
    auto out = net.forward(two_edge_path(), 0);
    // Two padded walks reach a at cost 2; one reaches b at cost 5.
    EXPECT_NEAR(out[1], 2.0 - h * std::log(2.0), 1e-12);
    EXPECT_NEAR(out[2], 5.0, 1e-12);
    // The soft-min at s is -h ln(1 + e^{-4/h}) < 0; the decoder ReLU clamps it.
    EXPECT_EQ(out[0], 0.0);
  }
}

TEST(WeightedSssp, ErrorAtTwoHundredthsExceedsTenToMinusFour) {
  auto net = build_weighted_sssp_net(0.02, 2);
  auto err = approximation_error(net, two_edge_path(), 0);
  EXPECT_EQ(err.worst_node, 1);
  EXPECT_NEAR(err.max_error, 0.02 * std::log(2.0), 1e-12);
}

TEST(WeightedSssp, ThresholdMatchesClosedForm) {
  auto h = find_h_threshold(NetVariant::kWeightedSssp, 2, two_edge_path(), 0, 0.01);
  ASSERT_TRUE(h.has_value());
  EXPECT_NEAR(*h, 0.01 / std::log(2.0), 1e-9);
}

TEST(UnweightedSssp, PathDistances) {
  auto g = path_graph({0.3, 0.9, 0.1});
  auto net = build_unweighted_sssp_net(0.02, 3);
  auto out = net.forward(g, 0);
  EXPECT_NEAR(out[3], 3.0, 1e-12);
  EXPECT_NEAR(out[2], 2.0 - 0.02 * std::log(3.0), 1e-12);
}

TEST(UnweightedSssp, RawUpdateAgreesWithSimplified) {
  RandomSource rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = er_graph(10, 0.3, rng);
    for (double h : {0.8, 0.4, 0.2}) {
      auto net = build_unweighted_sssp_net(h, 3);
      auto a = net.forward(g, 0, false);
      auto b = net.forward(g, 0, true);
      for (std::size_t u = 0; u < a.size(); ++u) {
        if (std::isinf(a[u]) || a[u] > net.radius()) continue;
        EXPECT_NEAR(a[u], b[u], 1e-12 * std::max(1.0, std::abs(a[u])));
      }
    }
  }
}

TEST(ShortestPathNets, BiasSandwichAndMonotoneSweep) {
  RandomSource rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = er_graph(12, 0.35, rng);
    for (auto variant : {NetVariant::kUnweightedSssp, NetVariant::kWeightedSssp}) {
      double prev = kInf;
      for (double h : kHSweep) {
        auto net = build_net(variant, h, 3);
        auto bias = check_bias_bound(net, g, 0);
        EXPECT_TRUE(bias.holds) << variant_name(variant) << " h=" << h << " node=" << bias.node;
        const double err = approximation_error(net, g, 0).max_error;
        EXPECT_LE(err, prev + 1e-12);
        prev = err;
      }
    }
  }
}

TEST(ShortestPathNets, UnreachableNodesAreMasked) {
  GraphInstance g(3, {{0, 1}}, {0.5});
  auto err = approximation_error(build_weighted_sssp_net(0.1, 2), g, 0);
  EXPECT_FALSE(err.compared[2]);
  EXPECT_TRUE(err.compared[1]);
}

TEST(PaddedWalks, CountsOnPath) {
  auto walks = padded_walk_counts(two_edge_path(), 0, 2);
  EXPECT_EQ(walks, (RealVec{2, 2, 1}));
}

TEST(NetJson, RoundTripPreservesForward) {
  RandomSource rng(1);
  auto g = er_graph(8, 0.4, rng);
  for (auto variant : {NetVariant::kReachability, NetVariant::kUnweightedSssp, NetVariant::kWeightedSssp}) {
    auto net = build_net(variant, 0.1, 3);
    auto back = net_from_json(Json::parse(net_to_json(net).dump()));
    EXPECT_EQ(back.forward(g, 0), net.forward(g, 0));
  }
  EXPECT_THROW(parse_variant("bogus"), Error);
}

TEST(Builders, RejectBadParameters) {
  EXPECT_THROW(build_reachability_net(0.0, 2), Error);
  EXPECT_THROW(build_weighted_sssp_net(0.1, 0), Error);
}
