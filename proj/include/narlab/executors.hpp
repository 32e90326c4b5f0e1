#pragma once

#include <cstdint>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/trajectory.hpp"

// Classical executors that record inputs / hints / outputs. Every priority
// queue breaks ties by the smallest node id so trajectories are reproducible.

namespace narlab {

/// Reachability from s. Hint t holds r^(t): nodes reachable with at most t
/// edges; one hint per layer until the frontier is exhausted (eccentricity of s).
inline Trajectory run_bfs(const GraphInstance& g, NodeId s) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (s < 0 || static_cast<std::size_t>(s) >= n) throw Error(ErrorCode::kInvalidArgument, "source out of range");
  Trajectory traj;
  traj.algorithm = AlgorithmId::kBfs;
  IntVec r(n, 0);
  r[s] = 1;
  traj.inputs["s"] = std::int64_t{s};
  traj.inputs["r0"] = r;

  std::vector<NodeId> frontier{s};
  while (true) {
    std::vector<NodeId> next;
    IntVec step = r;
    for (NodeId u : frontier) {
      for (const auto& arc : g.out_arcs(u)) {
        if (step[arc.to] == 0) {
          step[arc.to] = 1;
          next.push_back(arc.to);
        }
      }
    }
    if (next.empty()) break;
    r = std::move(step);
    traj.hints.push_back({{"r", r}});
    frontier = std::move(next);
  }
  traj.outputs["r"] = r;
  return traj;
}

/// Bellman-Ford with in-place relaxation over edges in storage order. Always
/// records |V|-1 rounds; outputs.converged_round is the first round without
/// any update (-1 if every round changed something).
inline Trajectory run_bellman_ford(const GraphInstance& g, NodeId s) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (s < 0 || static_cast<std::size_t>(s) >= n) throw Error(ErrorCode::kInvalidArgument, "source out of range");
  Trajectory traj;
  traj.algorithm = AlgorithmId::kBellmanFord;
  RealVec d(n, kInf);
  IntVec pred(n, kNoNode);
  d[s] = 0.0;
  traj.inputs["s"] = std::int64_t{s};
  traj.inputs["d0"] = d;

  std::int64_t converged_round = -1;
  const auto& edges = g.edges();
  const auto& w = g.weights();
  for (std::size_t round = 1; round < n; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto u = edges[e].head;
      const auto v = edges[e].tail;
      if (d[u] + w[e] < d[v]) {
        d[v] = d[u] + w[e];
        pred[v] = u;
        changed = true;
      }
    }
    if (!changed && converged_round < 0) converged_round = static_cast<std::int64_t>(round);
    traj.hints.push_back({{"d", d}, {"pred", pred}});
  }
  traj.outputs["d"] = d;
  traj.outputs["pred"] = pred;
  traj.outputs["converged_round"] = converged_round;
  return traj;
}

namespace detail {

// Linear-scan extract-min keyed by (key, id) over nodes still queued.
inline NodeId extract_min(const RealVec& key, const std::vector<bool>& queued) {
  NodeId best = kNoNode;
  for (std::size_t v = 0; v < key.size(); ++v) {
    if (!queued[v]) continue;
    if (best == kNoNode || key[v] < key[best]) best = static_cast<NodeId>(v);
  }
  return best;
}

}  // namespace detail

/// Dijkstra over the whole vertex set: exactly |V| extractions, unreachable
/// nodes are popped last with d = +inf.
inline Trajectory run_dijkstra(const GraphInstance& g, NodeId s) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (s < 0 || static_cast<std::size_t>(s) >= n) throw Error(ErrorCode::kInvalidArgument, "source out of range");
  if (g.has_negative_weight()) throw Error(ErrorCode::kNegativeWeight, "Dijkstra needs nonnegative weights");
  Trajectory traj;
  traj.algorithm = AlgorithmId::kDijkstra;
  RealVec d(n, kInf);
  IntVec pred(n, kNoNode);
  d[s] = 0.0;
  traj.inputs["s"] = std::int64_t{s};
  traj.inputs["d0"] = d;

  std::vector<bool> queued(n, true);
  const auto& w = g.weights();
  for (std::size_t it = 0; it < n; ++it) {
    const NodeId u = detail::extract_min(d, queued);
    queued[u] = false;
    for (const auto& arc : g.out_arcs(u)) {
      if (queued[arc.to] && d[u] + w[arc.edge] < d[arc.to]) {
        d[arc.to] = d[u] + w[arc.edge];
        pred[arc.to] = u;
      }
    }
    traj.hints.push_back({{"popped", std::int64_t{u}}, {"d_or_key", d}, {"pred", pred}});
  }
  traj.outputs["d"] = d;
  traj.outputs["pred"] = pred;
  return traj;
}

/// Prim's MST from `start` (node 0 unless overridden). Outputs key (weight of
/// the edge that attached each node, 0 at the root) and pred.
inline Trajectory run_prim(const GraphInstance& g, NodeId start = 0) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (start < 0 || static_cast<std::size_t>(start) >= n) throw Error(ErrorCode::kInvalidArgument, "start out of range");
  Trajectory traj;
  traj.algorithm = AlgorithmId::kPrim;
  RealVec key(n, kInf);
  IntVec pred(n, kNoNode);
  key[start] = 0.0;
  traj.inputs["start"] = std::int64_t{start};

  std::vector<bool> queued(n, true);
  const auto& w = g.weights();
  for (std::size_t it = 0; it < n; ++it) {
    const NodeId u = detail::extract_min(key, queued);
    if (key[u] == kInf) throw Error(ErrorCode::kDisconnected, "Prim: graph is not connected");
    queued[u] = false;
    for (const auto& arc : g.out_arcs(u)) {
      if (queued[arc.to] && w[arc.edge] < key[arc.to]) {
        pred[arc.to] = u;
        key[arc.to] = w[arc.edge];
      }
    }
    traj.hints.push_back({{"popped", std::int64_t{u}}, {"d_or_key", key}, {"pred", pred}});
  }
  traj.outputs["key"] = key;
  traj.outputs["pred"] = pred;
  return traj;
}

inline double mst_weight(const Trajectory& prim) {
  double total = 0.0;
  for (double k : prim.output<RealVec>("key")) total += k;
  return total;
}

}  // namespace narlab
