#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/matrix.hpp"
#include "narlab/random.hpp"
#include "narlab/trajectory.hpp"

namespace narlab {

/// Residual capacities at or below this are treated as saturated.
inline constexpr double kResidualEps = 1e-12;
/// Node imbalances at or below this count as conserved.
inline constexpr double kConservationTol = 1e-9;
/// Capacity slack allowed after repair.
inline constexpr double kCapacityTol = 1e-12;

/// Dense flow assignment. F_uv > 0 means net flow u -> v; feasible states are
/// antisymmetric, respect F_uv <= C_uv and conserve flow at internal nodes.
struct FlowState {
  RealMatrix F;
  RealMatrix C;
  NodeId s = 0;
  NodeId t = 0;

  std::size_t size() const { return F.rows(); }
};

inline FlowState zero_flow(const GraphInstance& g, NodeId s, NodeId t) {
  const auto n = static_cast<std::size_t>(g.node_count());
  return {RealMatrix(n, n, 0.0), g.capacity_matrix(), s, t};
}

/// Binary s/t labelling: side[v] = 0 on the source side, 1 on the sink side.
struct CutAssignment {
  std::vector<int> side;
  double cut_weight = 0.0;
};

struct ConservationReport {
  RealVec net_outflow;  // signed Σ_j F_vj
  RealVec epsilon;      // |net_outflow|, zero below tolerance and at s, t
  std::vector<NodeId> negative;  // V-: internal nodes that retain flow
  std::vector<NodeId> positive;  // V+: internal nodes that emit more than they receive
};

inline double net_outflow(const RealMatrix& f, NodeId v) {
  double sum = 0.0;
  for (double x : f.row(static_cast<std::size_t>(v))) sum += x;
  return sum;
}

/// max(Σ_j F_sj, |Σ_j F_jt|).
inline double flow_value(const FlowState& flow) {
  double out_s = 0.0;
  double in_t = 0.0;
  for (std::size_t j = 0; j < flow.size(); ++j) {
    out_s += flow.F(flow.s, j);
    in_t += flow.F(j, flow.t);
  }
  return std::max(out_s, std::abs(in_t));
}

inline RealMatrix antisymmetrize(const RealMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::kDimensionMismatch, "antisymmetrize needs a square matrix");
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) - m(j, i);
  return out;
}

/// tanh(M) ⊙ C element-wise. A negative entry at (u, v) stands for flow
/// v -> u, so it is scaled by c_vu; on symmetric C this is the plain product,
/// and an antisymmetric M stays antisymmetric for any C.
inline RealMatrix tanh_clamp(const RealMatrix& m, const RealMatrix& c) {
  if (m.rows() != c.rows() || m.cols() != c.cols() || !m.square())
    throw Error(ErrorCode::kDimensionMismatch, "tanh_clamp shapes differ");
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double x = std::tanh(m(i, j));
      out(i, j) = x * (x >= 0.0 ? c(i, j) : c(j, i));
    }
  return out;
}

inline bool is_antisymmetric(const RealMatrix& m, double tol = 0.0) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) + m(j, i)) > tol) return false;
  return true;
}

inline ConservationReport conservation_report(const FlowState& flow) {
  ConservationReport rep;
  const auto n = flow.size();
  rep.net_outflow.resize(n);
  rep.epsilon.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    rep.net_outflow[v] = net_outflow(flow.F, static_cast<NodeId>(v));
    if (static_cast<NodeId>(v) == flow.s || static_cast<NodeId>(v) == flow.t) continue;
    const double x = rep.net_outflow[v];
    if (x < -kConservationTol) rep.negative.push_back(static_cast<NodeId>(v));
    if (x > kConservationTol) rep.positive.push_back(static_cast<NodeId>(v));
    if (std::abs(x) > kConservationTol) rep.epsilon[v] = std::abs(x);
  }
  return rep;
}

/// Largest violation of F_uv <= C_uv (0 when feasible).
inline double capacity_violation(const FlowState& flow) {
  double worst = 0.0;
  for (std::size_t i = 0; i < flow.size(); ++i)
    for (std::size_t j = 0; j < flow.size(); ++j) worst = std::max(worst, flow.F(i, j) - flow.C(i, j));
  return worst;
}

/// Largest |net outflow| over internal nodes.
inline double conservation_residual(const FlowState& flow) {
  double worst = 0.0;
  for (std::size_t v = 0; v < flow.size(); ++v) {
    if (static_cast<NodeId>(v) == flow.s || static_cast<NodeId>(v) == flow.t) continue;
    worst = std::max(worst, std::abs(net_outflow(flow.F, static_cast<NodeId>(v))));
  }
  return worst;
}

namespace detail {

// Shortest-hop s -> t path in the residual graph via Bellman-Ford with unit
// lengths (synchronous rounds, smallest predecessor id wins). Empty when t is
// unreachable.
inline std::vector<NodeId> residual_path(const FlowState& flow) {
  const auto n = flow.size();
  std::vector<int> hops(n, -1);
  std::vector<NodeId> pred(n, kNoNode);
  hops[flow.s] = 0;
  for (int round = 1; round < static_cast<int>(n); ++round) {
    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (hops[v] >= 0) continue;
      for (std::size_t u = 0; u < n; ++u) {
        if (hops[u] != round - 1) continue;
        if (flow.C(u, v) - flow.F(u, v) > kResidualEps) {
          hops[v] = round;
          pred[v] = static_cast<NodeId>(u);
          changed = true;
          break;
        }
      }
    }
    if (!changed || hops[flow.t] >= 0) break;
  }
  if (hops[flow.t] < 0) return {};
  std::vector<NodeId> path{flow.t};
  while (path.back() != flow.s) path.push_back(pred[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

inline std::vector<bool> residual_reachable(const FlowState& flow) {
  const auto n = flow.size();
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{static_cast<std::size_t>(flow.s)};
  seen[flow.s] = true;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (!seen[v] && flow.C(u, v) - flow.F(u, v) > kResidualEps) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace detail

struct MaxFlowResult {
  FlowState flow;
  Trajectory trajectory;
  int augmentations = 0;
};

/// Ford-Fulkerson with shortest-hop augmenting paths (Edmonds-Karp order).
/// Hints per augmentation: path pi, bottleneck df, flow snapshot F.
inline MaxFlowResult ford_fulkerson(const GraphInstance& g, NodeId s, NodeId t) {
  const int n = g.node_count();
  if (s < 0 || s >= n || t < 0 || t >= n) throw Error(ErrorCode::kInvalidArgument, "s/t out of range");
  if (s == t) throw Error(ErrorCode::kSourceEqualsTarget, "ford_fulkerson needs s != t");
  MaxFlowResult res{zero_flow(g, s, t), {}, 0};
  auto& flow = res.flow;
  res.trajectory.algorithm = AlgorithmId::kFordFulkerson;
  res.trajectory.inputs["s"] = std::int64_t{s};
  res.trajectory.inputs["t"] = std::int64_t{t};
  res.trajectory.inputs["C"] = flow.C.data();

  while (true) {
    const auto path = detail::residual_path(flow);
    if (path.empty()) break;
    double df = kInf;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      df = std::min(df, flow.C(path[i], path[i + 1]) - flow.F(path[i], path[i + 1]));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      flow.F(path[i], path[i + 1]) += df;
      flow.F(path[i + 1], path[i]) -= df;
    }
    ++res.augmentations;
    assert(static_cast<std::size_t>(res.augmentations) <= static_cast<std::size_t>(n) * std::max<std::size_t>(1, g.edge_count()));
    res.trajectory.hints.push_back({{"pi", to_int_vec(path)}, {"df", df}, {"F", flow.F.data()}});
  }
  res.trajectory.outputs["F"] = flow.F.data();
  res.trajectory.outputs["value"] = flow_value(flow);
  return res;
}

/// Source side = nodes reachable from s in the residual graph.
inline CutAssignment min_cut(const GraphInstance& g, const FlowState& flow) {
  if (flow.size() != static_cast<std::size_t>(g.node_count()))
    throw Error(ErrorCode::kDimensionMismatch, "flow does not match graph");
  const auto reach = detail::residual_reachable(flow);
  if (reach[flow.t]) throw Error(ErrorCode::kNotMaximumFlow, "residual s->t path exists");
  CutAssignment cut;
  cut.side.resize(flow.size());
  for (std::size_t v = 0; v < flow.size(); ++v) cut.side[v] = reach[v] ? 0 : 1;
  for (const auto& e : g.edges())
    if (cut.side[e.head] == 0 && cut.side[e.tail] == 1) cut.cut_weight += flow.C(e.head, e.tail);
  return cut;
}

/// Weight of an arbitrary s/t cut given by side labels.
inline double cut_weight(const GraphInstance& g, const std::vector<int>& side) {
  const auto c = g.capacity_matrix();
  double total = 0.0;
  for (const auto& e : g.edges())
    if (side[e.head] == 0 && side[e.tail] == 1) total += c(e.head, e.tail);
  return total;
}

namespace detail {

class FlowRepairer {
 public:
  explicit FlowRepairer(FlowState& flow) : flow_(flow), n_(flow.size()) {}

  // V- nodes push their surplus back towards s, V+ nodes pull
  // their deficit back from t, along positive-flow edges.
  void balance_internal_nodes() {
    for (NodeId v : conservation_report(flow_).negative) drain(v, /*towards_source=*/true);
    for (NodeId v : conservation_report(flow_).positive) drain(v, /*towards_source=*/false);
    // A cancellation can stop early at another imbalanced node; sweep until clean.
    for (auto rep = conservation_report(flow_); !rep.negative.empty() || !rep.positive.empty();
         rep = conservation_report(flow_)) {
      for (NodeId v : rep.negative) drain(v, true);
      for (NodeId v : rep.positive) drain(v, false);
    }
  }

  // Clamp every edge above capacity. Returns true if
  // anything changed.
  bool enforce_capacities() {
    bool changed = false;
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (flow_.F(u, v) > flow_.C(u, v) + kCapacityTol) {
          flow_.F(u, v) = flow_.C(u, v);
          flow_.F(v, u) = -flow_.C(u, v);
          changed = true;
        }
      }
    }
    return changed;
  }

 private:
  bool internal(NodeId v) const { return v != flow_.s && v != flow_.t; }

  // Cancels flow on a path of positive-flow edges between v and the nearest
  // node with opposite imbalance (s or t preferred), until v is balanced.
  void drain(NodeId v, bool towards_source) {
    for (int guard = 0; guard < kMaxSteps; ++guard) {
      const double imb = net_outflow(flow_.F, v);
      const double eps = towards_source ? -imb : imb;
      if (eps <= kConservationTol) return;
      auto path = find_path(v, towards_source);
      if (path.empty()) {
        throw Error(ErrorCode::kRepairFailed, "no positive-flow path from stuck node " + std::to_string(v));
      }
      // path is oriented along the flow: path.front() emits, path.back() absorbs.
      const NodeId far = towards_source ? path.front() : path.back();
      double delta = std::min(eps, std::abs(net_outflow(flow_.F, far)));
      std::size_t bottleneck = 0;
      double bottleneck_flow = kInf;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double f = flow_.F(path[i], path[i + 1]);
        if (f < bottleneck_flow) {
          bottleneck_flow = f;
          bottleneck = i;
        }
      }
      delta = std::min(delta, bottleneck_flow);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto& f = flow_.F(path[i], path[i + 1]);
        f = (i == bottleneck && delta == bottleneck_flow) ? 0.0 : f - delta;
        flow_.F(path[i + 1], path[i]) = -f;
      }
    }
    throw Error(ErrorCode::kRepairFailed, "repair did not converge at node " + std::to_string(v));
  }

  // Backward (towards_source) or forward BFS over positive-flow edges from v.
  // Valid endpoints have imbalance of the opposite sign; the preferred
  // terminal (s backwards, t forwards) wins when reachable.
  std::vector<NodeId> find_path(NodeId v, bool towards_source) const {
    std::vector<NodeId> parent(n_, kNoNode);
    std::vector<bool> seen(n_, false);
    std::vector<NodeId> order;
    std::deque<NodeId> queue{v};
    seen[v] = true;
    while (!queue.empty()) {
      const NodeId x = queue.front();
      queue.pop_front();
      order.push_back(x);
      for (std::size_t y = 0; y < n_; ++y) {
        if (seen[y]) continue;
        const double f = towards_source ? flow_.F(y, x) : flow_.F(x, y);
        if (f > 0.0) {
          seen[y] = true;
          parent[y] = x;
          queue.push_back(static_cast<NodeId>(y));
        }
      }
    }
    auto valid = [&](NodeId x) {
      if (x == v) return false;
      const double imb = net_outflow(flow_.F, x);
      return towards_source ? imb > kEndpointEps : imb < -kEndpointEps;
    };
    const NodeId preferred = towards_source ? flow_.s : flow_.t;
    NodeId end = kNoNode;
    if (seen[preferred] && valid(preferred)) {
      end = preferred;
    } else {
      for (NodeId x : order) {
        if (valid(x)) {
          end = x;
          break;
        }
      }
    }
    if (end == kNoNode) return {};
    std::vector<NodeId> path{end};
    while (path.back() != v) path.push_back(parent[path.back()]);
    // Built from end back to v; orient it along the flow direction.
    if (!towards_source) std::reverse(path.begin(), path.end());
    return path;
  }

  static constexpr int kMaxSteps = 1 << 20;
  static constexpr double kEndpointEps = 1e-14;

  FlowState& flow_;
  std::size_t n_;
};

}  // namespace detail

/// Repairs an antisymmetric flow into a feasible one: conservation at every
/// internal node and F_uv <= C_uv. Flow on edges is only ever reduced, so the
/// flow value never increases.
inline FlowState ensure_flow_conservation(const GraphInstance& g, FlowState flow) {
  if (flow.size() != static_cast<std::size_t>(g.node_count()) || flow.C.rows() != flow.size())
    throw Error(ErrorCode::kDimensionMismatch, "flow does not match graph");
  if (!is_antisymmetric(flow.F, 1e-12)) throw Error(ErrorCode::kInvalidArgument, "flow matrix must be antisymmetric");
  detail::FlowRepairer repair(flow);
  repair.balance_internal_nodes();
  while (repair.enforce_capacities()) repair.balance_internal_nodes();
  return flow;
}

/// antisymmetrize -> tanh clamp -> conservation repair.
inline FlowState repair_prediction(const GraphInstance& g, const RealMatrix& raw, NodeId s, NodeId t) {
  FlowState flow{tanh_clamp(antisymmetrize(raw), g.capacity_matrix()), g.capacity_matrix(), s, t};
  return ensure_flow_conservation(g, std::move(flow));
}

enum class DualityVerdict { kStrong, kGap };

struct DualityCertificate {
  double primal = 0.0;
  double dual = 0.0;
  DualityVerdict verdict = DualityVerdict::kGap;
  bool weak_duality_holds = true;
  CutAssignment cut;
};

inline bool strong_duality_holds(double primal, double dual) {
  return std::abs(primal - dual) <= 1e-9 * std::max(1.0, dual);
}

/// Max flow vs min cut. Weak duality is also checked against scaled copies of
/// the max flow and a handful of random s/t cuts.
inline DualityCertificate certify_duality(const GraphInstance& g, NodeId s, NodeId t, std::uint64_t seed = 0) {
  auto mf = ford_fulkerson(g, s, t);
  DualityCertificate cert;
  cert.primal = flow_value(mf.flow);
  cert.cut = min_cut(g, mf.flow);
  cert.dual = cert.cut.cut_weight;
  cert.verdict = strong_duality_holds(cert.primal, cert.dual) ? DualityVerdict::kStrong : DualityVerdict::kGap;

  const double slack = 1e-9 * std::max(1.0, cert.dual);
  for (double lambda : {0.0, 0.25, 0.5, 0.75}) {
    FlowState sub = mf.flow;
    for (auto& x : sub.F.data()) x *= lambda;
    if (flow_value(sub) > cert.dual + slack) cert.weak_duality_holds = false;
  }
  RandomSource rng(seed);
  for (int i = 0; i < 8; ++i) {
    std::vector<int> side(static_cast<std::size_t>(g.node_count()));
    for (auto& x : side) x = rng.bernoulli(0.5) ? 1 : 0;
    side[s] = 0;
    side[t] = 1;
    if (cert.primal > cut_weight(g, side) + slack) cert.weak_duality_holds = false;
  }
  return cert;
}

/// Unit-capacity flow network for bipartite matching: super source n1+n2 feeds
/// the left part, super sink n1+n2+1 drains the right part, and every
/// left->right edge with positive capacity keeps capacity 1.
inline GraphInstance matching_network(const GraphInstance& bip, int n1) {
  const int n = bip.node_count();
  const NodeId src = n;
  const NodeId snk = n + 1;
  std::vector<Edge> edges;
  std::vector<double> caps;
  for (int u = 0; u < n1; ++u) {
    edges.push_back({src, u});
    caps.push_back(1.0);
  }
  for (std::size_t e = 0; e < bip.edge_count(); ++e) {
    const auto& ed = bip.edges()[e];
    const double c = bip.capacities() ? (*bip.capacities())[e] : 1.0;
    if (ed.head < n1 && ed.tail >= n1 && c > 0.0) {
      edges.push_back(ed);
      caps.push_back(1.0);
    }
  }
  for (int v = n1; v < n; ++v) {
    edges.push_back({v, snk});
    caps.push_back(1.0);
  }
  std::vector<double> weights(edges.size(), 1.0);
  return GraphInstance(n + 2, std::move(edges), std::move(weights), std::move(caps));
}

}  // namespace narlab
