#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"
#include "narlab/random.hpp"
#include "narlab/trajectory.hpp"

namespace narlab {

inline constexpr double kConsistencyTol = 1e-12;

/// Per-node heuristic values keyed to a target t.
struct HeuristicTable {
  RealVec values;
  NodeId t = kNoNode;

  HeuristicTable() = default;
  HeuristicTable(RealVec v, NodeId target) : values(std::move(v)), t(target) {
    for (double x : values)
      if (!std::isfinite(x) || x < 0.0)
        throw Error(ErrorCode::kInvalidArgument, "heuristic values must be finite and nonnegative");
    if (t < 0 || static_cast<std::size_t>(t) >= values.size())
      throw Error(ErrorCode::kInvalidArgument, "heuristic target out of range");
  }

  static HeuristicTable zero(int n, NodeId target) { return HeuristicTable(RealVec(static_cast<std::size_t>(n), 0.0), target); }
};

struct SearchResult {
  std::optional<std::vector<NodeId>> path;
  double cost = kInf;
  int iterations = 0;
  std::vector<NodeId> pop_sequence;
  int reopened = 0;
  double wall_time = 0.0;  // seconds
};

/// Sum of edge weights along a node sequence; throws if a hop is not an edge.
inline double path_cost(const GraphInstance& g, const std::vector<NodeId>& path) {
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto e = g.find_edge(path[i], path[i + 1]);
    if (!e) throw Error(ErrorCode::kInvalidArgument, "path uses a missing edge");
    c += g.weights()[*e];
  }
  return c;
}

/// A* with key d(v) + h(v), ties by node id. Closed nodes are reopened when a
/// shorter route shows up, so merely admissible tables still give optimal paths.
inline SearchResult astar(const GraphInstance& g, NodeId s, NodeId t, const HeuristicTable& h) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (s < 0 || t < 0 || static_cast<std::size_t>(s) >= n || static_cast<std::size_t>(t) >= n)
    throw Error(ErrorCode::kInvalidArgument, "search endpoints out of range");
  if (h.values.size() != n) throw Error(ErrorCode::kDimensionMismatch, "heuristic table size differs from |V|");
  if (g.has_negative_weight()) throw Error(ErrorCode::kNegativeWeight, "A* needs nonnegative weights");

  const auto started = std::chrono::steady_clock::now();
  using Entry = std::tuple<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  RealVec d(n, kInf);
  std::vector<NodeId> pred(n, kNoNode);
  std::vector<bool> closed(n, false);
  SearchResult res;

  d[s] = 0.0;
  open.emplace(h.values[s], s);
  const auto& w = g.weights();
  bool found = false;
  while (!open.empty()) {
    const auto [key, u] = open.top();
    open.pop();
    if (closed[u] || key != d[u] + h.values[u]) continue;  // stale entry
    closed[u] = true;
    ++res.iterations;
    res.pop_sequence.push_back(u);
    if (u == t) {
      found = true;
      break;
    }
    for (const auto& arc : g.out_arcs(u)) {
      const double nd = d[u] + w[arc.edge];
      if (nd < d[arc.to]) {
        d[arc.to] = nd;
        pred[arc.to] = u;
        if (closed[arc.to]) {
          closed[arc.to] = false;
          ++res.reopened;
        }
        open.emplace(nd + h.values[arc.to], arc.to);
      }
    }
  }
  if (found) {
    std::vector<NodeId> path;
    for (NodeId v = t; v != kNoNode; v = pred[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    res.cost = path_cost(g, path);
    res.path = std::move(path);
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!found) throw Error(ErrorCode::kNoPath, "target is not reachable from source");
  return res;
}

inline SearchResult dijkstra_search(const GraphInstance& g, NodeId s, NodeId t) {
  return astar(g, s, t, HeuristicTable::zero(g.node_count(), t));
}

/// Exact cost-to-go h*(v) = dist(v, t) via Dijkstra on the reversed graph.
inline RealVec distances_to(const GraphInstance& g, NodeId t) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::vector<std::pair<NodeId, double>>> rev(n);
  for (std::size_t e = 0; e < g.edges().size(); ++e)
    rev[g.edges()[e].tail].emplace_back(g.edges()[e].head, g.weights()[e]);
  RealVec d(n, kInf);
  using Entry = std::tuple<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  d[t] = 0.0;
  open.emplace(0.0, t);
  while (!open.empty()) {
    const auto [du, u] = open.top();
    open.pop();
    if (du != d[u]) continue;
    for (const auto& [v, wt] : rev[u]) {
      if (du + wt < d[v]) {
        d[v] = du + wt;
        open.emplace(d[v], v);
      }
    }
  }
  return d;
}

struct ConsistencyFractions {
  double edge = 1.0;
  double node = 1.0;
};

/// Share of edges with h(u) <= w_uv + h(v), and share of nodes whose every
/// outgoing edge passes.
inline ConsistencyFractions consistency_fraction(const GraphInstance& g, const HeuristicTable& h) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (h.values.size() != n) throw Error(ErrorCode::kDimensionMismatch, "heuristic table size differs from |V|");
  std::vector<bool> node_ok(n, true);
  std::size_t good_edges = 0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto [u, v] = g.edges()[e];
    if (h.values[u] <= g.weights()[e] + h.values[v] + kConsistencyTol)
      ++good_edges;
    else
      node_ok[u] = false;
  }
  ConsistencyFractions out;
  if (!g.edges().empty()) out.edge = static_cast<double>(good_edges) / static_cast<double>(g.edges().size());
  if (n > 0) out.node = static_cast<double>(std::count(node_ok.begin(), node_ok.end(), true)) / static_cast<double>(n);
  return out;
}

struct AdmissibilityReport {
  bool holds = true;
  double worst_overestimate = 0.0;  // max over v of h(v) - h*(v), floored at 0
  NodeId worst_node = kNoNode;
};

inline AdmissibilityReport admissibility_check(const GraphInstance& g, const HeuristicTable& h, NodeId t) {
  const auto exact = distances_to(g, t);
  if (h.values.size() != exact.size()) throw Error(ErrorCode::kDimensionMismatch, "heuristic table size differs from |V|");
  AdmissibilityReport rep;
  for (std::size_t v = 0; v < exact.size(); ++v) {
    if (std::isinf(exact[v])) continue;
    const double over = h.values[v] - exact[v];
    if (over > rep.worst_overestimate) {
      rep.worst_overestimate = over;
      rep.worst_node = static_cast<NodeId>(v);
    }
    if (over > kConsistencyTol) rep.holds = false;
  }
  return rep;
}

/// α · h*; nodes that cannot reach t get α · (total weight + 1), which keeps
/// the table consistent.
inline HeuristicTable scaled_exact_heuristic(const GraphInstance& g, NodeId t, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0,1]");
  auto d = distances_to(g, t);
  double total = 1.0;
  for (double w : g.weights()) total += w;
  for (auto& x : d) x = alpha * (std::isinf(x) ? total : x);
  return HeuristicTable(std::move(d), t);
}

inline HeuristicTable random_heuristic(const GraphInstance& g, NodeId t, std::uint64_t seed) {
  RandomSource rng(seed);
  RealVec v(static_cast<std::size_t>(g.node_count()));
  for (auto& x : v) x = rng.uniform();
  return HeuristicTable(std::move(v), t);
}

inline Json heuristic_to_json(const HeuristicTable& h) { return {{"t", h.t}, {"values", reals_to_json(h.values)}}; }

inline HeuristicTable heuristic_from_json(const Json& j) {
  try {
    return HeuristicTable(reals_from_json(j.at("values")), j.at("t").get<NodeId>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("heuristic JSON: ") + e.what());
  }
}

struct HeuristicMetrics {
  double c_edge = 1.0;
  double c_node = 1.0;
  double gap = 0.0;
  int j_astar = 0;
  int j_dijkstra = 0;
  double speedup = 1.0;
};

namespace detail {

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace detail

/// C, GAP, 𝒥 for both searches and SPEEDUP (median wall time over
/// `repetitions` runs of each search).
inline HeuristicMetrics evaluate_heuristic(const GraphInstance& g, NodeId s, NodeId t, const HeuristicTable& h,
                                           int repetitions = 10) {
  if (repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
  const auto a = astar(g, s, t, h);
  const auto d = dijkstra_search(g, s, t);
  HeuristicMetrics m;
  const auto c = consistency_fraction(g, h);
  m.c_edge = c.edge;
  m.c_node = c.node;
  m.gap = d.cost > 0.0 ? a.cost / d.cost - 1.0 : (a.cost > 0.0 ? kInf : 0.0);
  m.j_astar = a.iterations;
  m.j_dijkstra = d.iterations;
  std::vector<double> ta{a.wall_time};
  std::vector<double> td{d.wall_time};
  for (int r = 1; r < repetitions; ++r) {
    ta.push_back(astar(g, s, t, h).wall_time);
    td.push_back(dijkstra_search(g, s, t).wall_time);
  }
  const double mid_a = detail::median(ta);
  m.speedup = mid_a > 0.0 ? detail::median(td) / mid_a : 1.0;
  return m;
}

}  // namespace narlab
