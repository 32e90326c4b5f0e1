#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/executors.hpp"
#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"

namespace narlab {

struct Tour {
  std::vector<NodeId> order;  // closing edge order.back() -> order.front() is implied
  double cost = 0.0;

  bool operator==(const Tour&) const = default;
};

using NodePair = std::pair<NodeId, NodeId>;

inline constexpr std::size_t kMaxExactMatching = 20;
inline constexpr int kMaxHeldKarp = 16;

/// Dense distance matrix of a complete graph (throws if an off-diagonal pair
/// has no edge).
inline RealMatrix clique_distances(const GraphInstance& g) {
  auto w = g.weight_matrix(0.0);
  for (auto x : w.data())
    if (std::isinf(x)) throw Error(ErrorCode::kInvalidArgument, "expected a complete graph");
  return w;
}

inline bool is_valid_tour(std::size_t n, const std::vector<NodeId>& order) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (NodeId v : order) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline double tour_cost(const RealMatrix& w, const std::vector<NodeId>& order) {
  if (order.size() < 2) return 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) c += w(order[i], order[i + 1]);
  return c + w(order.back(), order.front());
}

/// Cost is null when the tour was decoded without distances.
inline Json tour_to_json(const Tour& t) {
  return {{"order", t.order}, {"cost", std::isnan(t.cost) ? Json(nullptr) : real_to_json(t.cost)}};
}

/// Exact minimum-weight perfect matching of `nodes` by subset DP; the lowest
/// unmatched node is always paired first.
inline std::vector<NodePair> min_weight_perfect_matching(const std::vector<NodeId>& nodes, const RealMatrix& w) {
  const std::size_t k = nodes.size();
  if (k % 2 != 0) throw Error(ErrorCode::kOddSet, "perfect matching needs an even node set");
  if (k > kMaxExactMatching) throw Error(ErrorCode::kSetTooLarge, "exact matching is limited to 20 nodes");
  if (k == 0) return {};
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  std::vector<double> best(std::size_t{full} + 1, kInf);
  std::vector<std::pair<std::int8_t, std::int8_t>> last(std::size_t{full} + 1, {-1, -1});
  best[0] = 0.0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (std::isinf(best[mask])) continue;
    int i = 0;
    while (mask & (std::uint32_t{1} << i)) ++i;
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j) {
      if (mask & (std::uint32_t{1} << j)) continue;
      const std::uint32_t next = mask | (std::uint32_t{1} << i) | (std::uint32_t{1} << j);
      const double c = best[mask] + w(nodes[i], nodes[j]);
      if (c < best[next]) {
        best[next] = c;
        last[next] = {static_cast<std::int8_t>(i), static_cast<std::int8_t>(j)};
      }
    }
  }
  std::vector<NodePair> out;
  for (std::uint32_t mask = full; mask;) {
    const auto [i, j] = last[mask];
    out.emplace_back(nodes[i], nodes[j]);
    mask &= ~((std::uint32_t{1} << i) | (std::uint32_t{1} << j));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// Repeatedly pairs the globally cheapest remaining pair. No guarantee.
inline std::vector<NodePair> greedy_matching(std::vector<NodeId> nodes, const RealMatrix& w) {
  if (nodes.size() % 2 != 0) throw Error(ErrorCode::kOddSet, "perfect matching needs an even node set");
  std::vector<NodePair> out;
  while (!nodes.empty()) {
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (w(nodes[i], nodes[j]) < w(nodes[bi], nodes[bj])) bi = i, bj = j;
    out.emplace_back(nodes[bi], nodes[bj]);
    nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(bj));
    nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(bi));
  }
  return out;
}

struct EulerWalk {
  std::vector<NodeId> nodes;       // closed: front() == back()
  std::vector<std::size_t> edges;  // indices into the input list, in walk order
};

/// Hierholzer on an undirected multigraph.
inline EulerWalk eulerian_circuit(int n, const std::vector<NodePair>& edges) {
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    if (u < 0 || v < 0 || u >= n || v >= n) throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    adj[u].emplace_back(v, e);
    adj[v].emplace_back(u, e);
  }
  NodeId start = kNoNode;
  for (NodeId v = 0; v < n; ++v) {
    if (adj[v].size() % 2 != 0) throw Error(ErrorCode::kOddDegree, "node " + std::to_string(v) + " has odd degree");
    if (start == kNoNode && !adj[v].empty()) start = v;
  }
  EulerWalk walk;
  if (start == kNoNode) return walk;

  std::vector<bool> used(edges.size(), false);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<NodeId, std::size_t>> stack{{start, edges.size()}};
  while (!stack.empty()) {
    const NodeId u = stack.back().first;
    auto& c = cursor[u];
    while (c < adj[u].size() && used[adj[u][c].second]) ++c;
    if (c == adj[u].size()) {
      walk.nodes.push_back(u);
      if (stack.back().second != edges.size()) walk.edges.push_back(stack.back().second);
      stack.pop_back();
    } else {
      const auto [v, e] = adj[u][c];
      used[e] = true;
      stack.emplace_back(v, e);
    }
  }
  if (walk.edges.size() != edges.size()) throw Error(ErrorCode::kDisconnected, "edges span more than one component");
  std::reverse(walk.nodes.begin(), walk.nodes.end());
  std::reverse(walk.edges.begin(), walk.edges.end());
  return walk;
}

struct ChristofidesResult {
  Tour tour;
  std::vector<NodePair> tree;
  std::vector<NodePair> matching;
  bool greedy_matching = false;  // true voids the 1.5 bound
};

/// MST -> odd-degree nodes -> perfect matching -> Euler circuit -> shortcut.
inline ChristofidesResult christofides(const GraphInstance& g, bool allow_greedy = false) {
  const auto w = clique_distances(g);
  const int n = g.node_count();
  ChristofidesResult res;
  if (n == 1) {
    res.tour = {{0}, 0.0};
    return res;
  }
  const auto prim = run_prim(g, 0);
  const auto& pred = prim.output<IntVec>("pred");
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) {
    if (pred[v] == kNoNode) continue;
    res.tree.emplace_back(static_cast<NodeId>(pred[v]), v);
    ++degree[v];
    ++degree[pred[v]];
  }
  std::vector<NodeId> odd;
  for (NodeId v = 0; v < n; ++v)
    if (degree[v] % 2) odd.push_back(v);
  if (odd.size() > kMaxExactMatching && allow_greedy) {
    res.matching = greedy_matching(odd, w);
    res.greedy_matching = true;
  } else {
    res.matching = min_weight_perfect_matching(odd, w);
  }
  auto multigraph = res.tree;
  multigraph.insert(multigraph.end(), res.matching.begin(), res.matching.end());
  const auto walk = eulerian_circuit(n, multigraph);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (NodeId v : walk.nodes) {
    if (!seen[v]) {
      seen[v] = true;
      res.tour.order.push_back(v);
    }
  }
  res.tour.cost = tour_cost(w, res.tour.order);
  return res;
}

/// Exact TSP by bitmask DP over tours starting at node 0.
inline Tour held_karp(const GraphInstance& g) {
  const int n = g.node_count();
  if (n > kMaxHeldKarp) throw Error(ErrorCode::kTooLarge, "held_karp is limited to 16 nodes");
  const auto w = clique_distances(g);
  if (n <= 2) {
    Tour t;
    for (NodeId v = 0; v < n; ++v) t.order.push_back(v);
    t.cost = tour_cost(w, t.order);
    return t;
  }
  // Subsets of {1..n-1}; bit (v-1) stands for node v.
  const int m = n - 1;
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<double> dp(subsets * static_cast<std::size_t>(m), kInf);
  std::vector<std::int8_t> parent(subsets * static_cast<std::size_t>(m), -1);
  auto at = [m](std::size_t mask, int j) { return mask * static_cast<std::size_t>(m) + static_cast<std::size_t>(j); };
  for (int j = 0; j < m; ++j) dp[at(std::size_t{1} << j, j)] = w(0, j + 1);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (int j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      const double cur = dp[at(mask, j)];
      if (std::isinf(cur)) continue;
      for (int k = 0; k < m; ++k) {
        if (mask >> k & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double c = cur + w(j + 1, k + 1);
        if (c < dp[at(next, k)]) {
          dp[at(next, k)] = c;
          parent[at(next, k)] = static_cast<std::int8_t>(j);
        }
      }
    }
  }
  const std::size_t full = subsets - 1;
  int last = 0;
  double best = kInf;
  for (int j = 0; j < m; ++j) {
    const double c = dp[at(full, j)] + w(j + 1, 0);
    if (c < best) {
      best = c;
      last = j;
    }
  }
  std::vector<NodeId> rev;
  std::size_t mask = full;
  for (int j = last; j >= 0;) {
    rev.push_back(j + 1);
    const int p = parent[at(mask, j)];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  Tour t;
  t.order.push_back(0);
  t.order.insert(t.order.end(), rev.rbegin(), rev.rend());
  t.cost = tour_cost(w, t.order);
  return t;
}

/// Always move to the closest unvisited node (ties by id).
inline Tour nearest_neighbour_tour(const GraphInstance& g, NodeId start = 0) {
  const auto w = clique_distances(g);
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<bool> seen(n, false);
  Tour t;
  NodeId cur = start;
  for (std::size_t step = 0; step < n; ++step) {
    t.order.push_back(cur);
    seen[cur] = true;
    NodeId next = kNoNode;
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v] && (next == kNoNode || w(cur, v) < w(cur, next))) next = static_cast<NodeId>(v);
    cur = next;
  }
  t.cost = tour_cost(w, t.order);
  return t;
}

/// Row v scores the successors of v.
using PointerMatrix = RealMatrix;

inline constexpr double kLogFloor = 1e-12;

inline PointerMatrix normalize_rows(PointerMatrix p) {
  for (std::size_t r = 0; r < p.rows(); ++r) {
    auto row = p.row(r);
    double sum = 0.0;
    for (double x : row) {
      if (!(x >= 0.0) || std::isinf(x)) throw Error(ErrorCode::kInvalidArgument, "pointer scores must be finite and >= 0");
      sum += x;
    }
    for (auto& x : row) x = sum > 0.0 ? x / sum : 1.0 / static_cast<double>(row.size());
  }
  return p;
}

struct BeamOptions {
  std::size_t width = 1;
  NodeId start = 0;
  bool multi_start = false;
  std::optional<RealMatrix> distances;  // tie-break by tour cost when present
};

/// Beam search over partial permutations scored by summed log-probabilities;
/// the closing edge is scored too. Final ties: tour cost, then lexicographic.
inline Tour beam_search_tour(const PointerMatrix& pointers, const BeamOptions& opts) {
  if (!pointers.square() || pointers.rows() == 0) throw Error(ErrorCode::kDimensionMismatch, "pointer matrix must be square");
  if (opts.width < 1) throw Error(ErrorCode::kInvalidArgument, "beam width must be >= 1");
  const std::size_t n = pointers.rows();
  if (opts.start < 0 || static_cast<std::size_t>(opts.start) >= n) throw Error(ErrorCode::kInvalidArgument, "start out of range");
  if (opts.distances && (opts.distances->rows() != n || !opts.distances->square()))
    throw Error(ErrorCode::kDimensionMismatch, "distance matrix size differs from pointer matrix");
  const auto p = normalize_rows(pointers);
  RealMatrix logp(n, n);
  for (std::size_t i = 0; i < n * n; ++i) logp.data()[i] = std::log(p.data()[i] + kLogFloor);

  struct Beam {
    std::vector<NodeId> seq;
    double score;
  };
  auto by_score = [](const Beam& a, const Beam& b) { return a.score != b.score ? a.score > b.score : a.seq < b.seq; };

  std::vector<Beam> finals;
  std::vector<NodeId> starts{opts.start};
  if (opts.multi_start) {
    starts.resize(n);
    std::iota(starts.begin(), starts.end(), 0);
  }
  for (NodeId s : starts) {
    std::vector<Beam> beams{{{s}, 0.0}};
    for (std::size_t depth = 1; depth < n; ++depth) {
      std::vector<Beam> next;
      for (const auto& b : beams) {
        std::vector<bool> used(n, false);
        for (NodeId v : b.seq) used[v] = true;
        for (std::size_t v = 0; v < n; ++v) {
          if (used[v]) continue;
          auto seq = b.seq;
          seq.push_back(static_cast<NodeId>(v));
          next.push_back({std::move(seq), b.score + logp(b.seq.back(), v)});
        }
      }
      std::sort(next.begin(), next.end(), by_score);
      if (next.size() > opts.width) next.resize(opts.width);
      beams = std::move(next);
    }
    for (auto& b : beams) {
      if (n > 1) b.score += logp(b.seq.back(), b.seq.front());
      finals.push_back(std::move(b));
    }
  }
  auto cost_of = [&](const Beam& b) { return opts.distances ? tour_cost(*opts.distances, b.seq) : 0.0; };
  const auto best = std::min_element(finals.begin(), finals.end(), [&](const Beam& a, const Beam& b) {
    if (a.score != b.score) return a.score > b.score;
    const double ca = cost_of(a), cb = cost_of(b);
    if (ca != cb) return ca < cb;
    return a.seq < b.seq;
  });
  Tour t{best->seq, opts.distances ? cost_of(*best) : std::nan("")};
  return t;
}

inline PointerMatrix pointers_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    auto rows = reals_from_json(j.at("rows"));
    if (rows.size() != n * n) throw Error(ErrorCode::kSchemaMismatch, "pointer rows must hold n*n values");
    return PointerMatrix(n, n, std::move(rows));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("pointer JSON: ") + e.what());
  }
}

inline Json pointers_to_json(const PointerMatrix& p) { return {{"n", p.rows()}, {"rows", reals_to_json(p.data())}}; }

inline double optimality_gap_co(double value, double optimal) {
  if (!(optimal > 0.0)) throw Error(ErrorCode::kInvalidArgument, "optimal value must be positive");
  return value / optimal - 1.0;
}

}  // namespace narlab
