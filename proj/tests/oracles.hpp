#pragma once

// Brute-force reference answers used by the tests. Deliberately naive and
// independent of the library algorithms they check.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "narlab/graph.hpp"

namespace oracle {

using narlab::GraphInstance;
using narlab::NodeId;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Cheapest simple s->t path by exhaustive DFS.
inline double cheapest_simple_path(const GraphInstance& g, NodeId s, NodeId t) {
  std::vector<bool> on(static_cast<std::size_t>(g.node_count()), false);
  double best = kInf;
  std::function<void(NodeId, double)> dfs = [&](NodeId u, double cost) {
    if (u == t) {
      best = std::min(best, cost);
      return;
    }
    on[u] = true;
    for (std::size_t e = 0; e < g.edges().size(); ++e)
      if (g.edges()[e].head == u && !on[g.edges()[e].tail]) dfs(g.edges()[e].tail, cost + g.weights()[e]);
    on[u] = false;
  };
  dfs(s, 0.0);
  return best;
}

/// Minimum over all 2^(n-2) s/t cuts of the crossing capacity.
inline double min_cut_exhaustive(const GraphInstance& g, NodeId s, NodeId t) {
  const int n = g.node_count();
  std::vector<NodeId> free_nodes;
  for (NodeId v = 0; v < n; ++v)
    if (v != s && v != t) free_nodes.push_back(v);
  double best = kInf;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_nodes.size()); ++mask) {
    std::vector<int> side(static_cast<std::size_t>(n), 1);
    side[s] = 0;
    for (std::size_t i = 0; i < free_nodes.size(); ++i)
      if (mask >> i & 1) side[free_nodes[i]] = 0;
    double w = 0.0;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const auto [u, v] = g.edges()[e];
      if (side[u] == 0 && side[v] == 1) w += g.capacities() ? (*g.capacities())[e] : g.weights()[e];
    }
    best = std::min(best, w);
  }
  return best;
}

/// Maximum matching size over left->right edges with positive capacity.
/// Tries every assignment of each left node (unmatched or any free right
/// neighbour), memoised on the set of used right nodes. Right side <= 20.
inline int max_matching_exhaustive(const GraphInstance& g, int n1) {
  const int n2 = g.node_count() - n1;
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n1));
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto [u, v] = g.edges()[e];
    const double c = g.capacities() ? (*g.capacities())[e] : 1.0;
    if (u < n1 && v >= n1 && c > 0.0) nbr[u].push_back(v - n1);
  }
  std::vector<int> memo(static_cast<std::size_t>(n1 + 1) << n2, -1);
  std::function<int(int, std::uint32_t)> rec = [&](int i, std::uint32_t used) -> int {
    if (i == n1) return 0;
    int& slot = memo[(static_cast<std::size_t>(i) << n2) | used];
    if (slot >= 0) return slot;
    int best = rec(i + 1, used);
    for (int r : nbr[i])
      if (!(used >> r & 1)) best = std::max(best, 1 + rec(i + 1, used | (1u << r)));
    return slot = best;
  };
  return rec(0, 0);
}

/// Cheapest tour by enumerating all permutations that start at node 0.
inline double best_tour_exhaustive(const narlab::RealMatrix& w) {
  const auto n = w.rows();
  if (n <= 1) return 0.0;
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += w(perm[i], perm[(i + 1) % n]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

/// Minimum-weight perfect matching by recursive enumeration of all pairings.
inline double perfect_matching_exhaustive(std::vector<NodeId> nodes, const narlab::RealMatrix& w) {
  if (nodes.empty()) return 0.0;
  const NodeId a = nodes.front();
  double best = kInf;
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    std::vector<NodeId> rest;
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (i != j) rest.push_back(nodes[i]);
    best = std::min(best, w(a, nodes[j]) + perfect_matching_exhaustive(rest, w));
  }
  return best;
}

/// Kruskal with a union-find: MST weight of an undirected graph.
inline double mst_weight_kruskal(const GraphInstance& g) {
  std::vector<std::size_t> order(g.edges().size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.weights()[a] < g.weights()[b]; });
  std::vector<int> parent(static_cast<std::size_t>(g.node_count()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  double total = 0.0;
  for (auto e : order) {
    const int a = find(g.edges()[e].head);
    const int b = find(g.edges()[e].tail);
    if (a != b) {
      parent[a] = b;
      total += g.weights()[e];
    }
  }
  return total;
}

/// Single-source distances by a textbook O(n^2) Dijkstra.
inline std::vector<double> dijkstra_plain(const GraphInstance& g, NodeId s) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<double> d(n, kInf);
  std::vector<bool> done(n, false);
  d[s] = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && (u == n || d[v] < d[u])) u = v;
    if (u == n || std::isinf(d[u])) break;
    done[u] = true;
    for (std::size_t e = 0; e < g.edges().size(); ++e)
      if (static_cast<std::size_t>(g.edges()[e].head) == u)
        d[g.edges()[e].tail] = std::min(d[g.edges()[e].tail], d[u] + g.weights()[e]);
  }
  return d;
}

/// Optimal k-center objective by enumerating every k-subset (recursive).
inline double kcenter_exhaustive(const narlab::RealMatrix& dist, int k) {
  const int n = static_cast<int>(dist.rows());
  double best = kInf;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == k) {
      double worst = 0.0;
      for (int v = 0; v < n; ++v) {
        double near = kInf;
        for (int c : pick) near = std::min(near, dist(c, v));
        worst = std::max(worst, near);
      }
      best = std::min(best, worst);
      return;
    }
    for (int v = from; v < n; ++v) {
      pick.push_back(v);
      rec(v + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace oracle
