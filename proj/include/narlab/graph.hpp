#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/matrix.hpp"
#include "narlab/random.hpp"

namespace narlab {

using NodeId = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr NodeId kNoNode = -1;

struct Edge {
  NodeId head;  // tail of the arrow in the usual drawing: head -> tail
  NodeId tail;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline double euclidean(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct OutArc {
  NodeId to;
  std::size_t edge;  // index into edges()/weights()
};

/// Directed weighted graph, immutable after construction. Undirected graphs
/// store both orientations with equal weight (and capacity).
class GraphInstance {
 public:
  GraphInstance(int node_count, std::vector<Edge> edges, std::vector<double> weights,
                std::optional<std::vector<double>> capacities = std::nullopt,
                std::optional<std::vector<Point>> points = std::nullopt)
      : n_(node_count),
        edges_(std::move(edges)),
        weights_(std::move(weights)),
        capacities_(std::move(capacities)),
        points_(std::move(points)) {
    validate();
    out_.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      out_[static_cast<std::size_t>(edges_[i].head)].push_back({edges_[i].tail, i});
    }
    for (auto& arcs : out_) {
      std::sort(arcs.begin(), arcs.end(), [](const OutArc& a, const OutArc& b) { return a.to < b.to; });
    }
  }

  int node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::optional<std::vector<double>>& capacities() const noexcept { return capacities_; }
  const std::optional<std::vector<Point>>& points() const noexcept { return points_; }

  /// Out-arcs of u sorted by target id.
  const std::vector<OutArc>& out_arcs(NodeId u) const { return out_[static_cast<std::size_t>(u)]; }

  std::optional<std::size_t> find_edge(NodeId u, NodeId v) const {
    for (const auto& arc : out_arcs(u))
      if (arc.to == v) return arc.edge;
    return std::nullopt;
  }

  double weight(NodeId u, NodeId v) const {
    auto e = find_edge(u, v);
    return e ? weights_[*e] : kInf;
  }

  bool has_negative_weight() const {
    return std::any_of(weights_.begin(), weights_.end(), [](double w) { return w < 0.0; });
  }

  /// Both orientations present with equal weight and capacity.
  bool is_symmetric() const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto back = find_edge(edges_[i].tail, edges_[i].head);
      if (!back || weights_[*back] != weights_[i]) return false;
      if (capacities_ && (*capacities_)[*back] != (*capacities_)[i]) return false;
    }
    return true;
  }

  /// n x n, +inf off-edge, 0 on the diagonal.
  RealMatrix weight_matrix(double diagonal = 0.0) const {
    RealMatrix m(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_), kInf);
    for (int i = 0; i < n_; ++i) m(i, i) = diagonal;
    for (std::size_t e = 0; e < edges_.size(); ++e) m(edges_[e].head, edges_[e].tail) = weights_[e];
    return m;
  }

  /// 0/1 adjacency without self loops.
  RealMatrix adjacency_matrix() const {
    RealMatrix m(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_), 0.0);
    for (const auto& e : edges_) m(e.head, e.tail) = 1.0;
    return m;
  }

  /// n x n capacities, 0 for non-edges. Falls back to weights when no capacities are stored.
  RealMatrix capacity_matrix() const {
    RealMatrix m(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_), 0.0);
    const auto& c = capacities_ ? *capacities_ : weights_;
    for (std::size_t e = 0; e < edges_.size(); ++e) m(edges_[e].head, edges_[e].tail) = c[e];
    return m;
  }

  bool operator==(const GraphInstance& o) const {
    return n_ == o.n_ && edges_ == o.edges_ && weights_ == o.weights_ &&
           capacities_ == o.capacities_ && points_ == o.points_;
  }

 private:
  void validate() const {
    if (n_ < 1) throw Error(ErrorCode::kInvalidArgument, "node_count must be positive");
    if (weights_.size() != edges_.size())
      throw Error(ErrorCode::kDimensionMismatch, "weights not aligned with edges");
    if (capacities_ && capacities_->size() != edges_.size())
      throw Error(ErrorCode::kDimensionMismatch, "capacities not aligned with edges");
    if (points_ && points_->size() != static_cast<std::size_t>(n_))
      throw Error(ErrorCode::kDimensionMismatch, "points not aligned with nodes");
    std::set<Edge> seen;
    for (const auto& e : edges_) {
      if (e.head < 0 || e.head >= n_ || e.tail < 0 || e.tail >= n_)
        throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
      if (e.head == e.tail) throw Error(ErrorCode::kInvalidArgument, "self-loops are not allowed");
      if (!seen.insert(e).second) throw Error(ErrorCode::kInvalidArgument, "duplicate directed edge");
    }
    if (capacities_ && std::any_of(capacities_->begin(), capacities_->end(), [](double c) { return c < 0.0; }))
      throw Error(ErrorCode::kInvalidArgument, "negative capacity");
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::optional<std::vector<double>> capacities_;
  std::optional<std::vector<Point>> points_;
  std::vector<std::vector<OutArc>> out_;
};

/// Accumulates undirected edges and emits both orientations.
class UndirectedBuilder {
 public:
  explicit UndirectedBuilder(int n) : n_(n) {}

  void add(NodeId u, NodeId v, double weight, std::optional<double> capacity = std::nullopt) {
    edges_.push_back({u, v});
    edges_.push_back({v, u});
    weights_.push_back(weight);
    weights_.push_back(weight);
    if (capacity) {
      caps_.push_back(*capacity);
      caps_.push_back(*capacity);
    }
  }

  std::vector<double>& capacities() { return caps_; }

  GraphInstance build(bool with_capacities, std::optional<std::vector<Point>> points = std::nullopt) && {
    std::optional<std::vector<double>> caps;
    if (with_capacities) caps = std::move(caps_);
    return GraphInstance(n_, std::move(edges_), std::move(weights_), std::move(caps), std::move(points));
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<double> caps_;
};

namespace detail {

inline void min_max_rescale(std::vector<double>& values) {
  if (values.empty()) return;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double lo_v = *lo;
  const double span = *hi - lo_v;
  for (auto& v : values) v = span > 0.0 ? (v - lo_v) / span : 0.0;
}

}  // namespace detail

/// SPARSE density used by the A* benchmark: natural log.
inline double sparse_probability(int n) {
  return n <= 1 ? 1.0 : std::log(static_cast<double>(n)) / static_cast<double>(n);
}

/// Erdős–Rényi G(n, p), undirected, weights U[0,1]. With rescale_weights the
/// weights are min-max normalised over the sampled edges.
inline GraphInstance er_graph(int n, double p, RandomSource& rng, bool rescale_weights = false) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must lie in [0,1]");
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> weights;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) {
        pairs.emplace_back(u, v);
        weights.push_back(rng.uniform());
      }
    }
  }
  if (rescale_weights) detail::min_max_rescale(weights);
  UndirectedBuilder b(n);
  for (std::size_t i = 0; i < pairs.size(); ++i) b.add(pairs[i].first, pairs[i].second, weights[i]);
  return std::move(b).build(false);
}

struct TwoCommunityOptions {
  double p_in = 0.75;
  double p_out = 0.05;
};

/// Two equal Erdős–Rényi halves joined sparsely. Capacities are drawn in
/// [0,10] and min-max rescaled over all edges; weights are U[0,1].
inline GraphInstance two_community_graph(int n, RandomSource& rng, TwoCommunityOptions opts = {}) {
  if (n < 4 || n % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "two_community_graph needs even n >= 4");
  const int half = n / 2;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> weights;
  std::vector<double> caps;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const bool same = (u < half) == (v < half);
      if (rng.bernoulli(same ? opts.p_in : opts.p_out)) {
        pairs.emplace_back(u, v);
        weights.push_back(rng.uniform());
        caps.push_back(rng.uniform(0.0, 10.0));
      }
    }
  }
  detail::min_max_rescale(caps);
  UndirectedBuilder b(n);
  for (std::size_t i = 0; i < pairs.size(); ++i) b.add(pairs[i].first, pairs[i].second, weights[i], caps[i]);
  return std::move(b).build(true);
}

/// Bipartite graph: left part [0, n1), right part [n1, n1+n2). Capacities are
/// 0 or 1 with equal odds, or all 1 when unit_capacity is set.
inline GraphInstance bipartite_graph(int n1, int n2, double p, RandomSource& rng, bool unit_capacity = false) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorCode::kInvalidArgument, "both parts need at least one node");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must lie in [0,1]");
  UndirectedBuilder b(n1 + n2);
  for (int u = 0; u < n1; ++u) {
    for (int v = n1; v < n1 + n2; ++v) {
      if (rng.bernoulli(p)) {
        const double w = rng.uniform();
        const double c = unit_capacity ? 1.0 : (rng.bernoulli(0.5) ? 1.0 : 0.0);
        b.add(u, v, w, c);
      }
    }
  }
  return std::move(b).build(true);
}

/// Complete graph over the given points with Euclidean weights.
inline GraphInstance euclidean_clique_from_points(std::vector<Point> points) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one point");
  UndirectedBuilder b(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) b.add(u, v, euclidean(points[u], points[v]));
  return std::move(b).build(false, std::move(points));
}

inline GraphInstance euclidean_clique(int n, RandomSource& rng) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "euclidean_clique needs n >= 3");
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  return euclidean_clique_from_points(std::move(pts));
}

/// Undirected path 0-1-...-n-1 with edge i joining i and i+1.
inline GraphInstance path_graph(const std::vector<double>& weights) {
  UndirectedBuilder b(static_cast<int>(weights.size()) + 1);
  for (std::size_t i = 0; i < weights.size(); ++i) b.add(static_cast<NodeId>(i), static_cast<NodeId>(i + 1), weights[i]);
  return std::move(b).build(false);
}

/// Undirected cycle on weights.size() >= 3 nodes; edge i joins i and i+1 mod n.
inline GraphInstance cycle_graph(const std::vector<double>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "cycle needs at least 3 nodes");
  UndirectedBuilder b(n);
  for (int i = 0; i < n; ++i) b.add(i, (i + 1) % n, weights[i]);
  return std::move(b).build(false);
}

/// Nodes reachable from s along directed edges (s included).
inline std::vector<bool> reachable_from(const GraphInstance& g, NodeId s) {
  std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
  std::vector<NodeId> stack{s};
  seen[s] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& arc : g.out_arcs(u)) {
      if (!seen[arc.to]) {
        seen[arc.to] = true;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

inline constexpr int kReachablePairRetries = 64;

/// Random (s, t), s != t, with a directed path s -> t. Rejection sampling
/// first, then a uniform draw from the exhaustive list of connected pairs.
inline std::pair<NodeId, NodeId> reachable_pair(const GraphInstance& g, RandomSource& rng) {
  const auto n = static_cast<std::uint64_t>(g.node_count());
  if (n >= 2) {
    for (int attempt = 0; attempt < kReachablePairRetries; ++attempt) {
      const auto s = static_cast<NodeId>(rng.below(n));
      auto t = static_cast<NodeId>(rng.below(n - 1));
      if (t >= s) ++t;
      if (reachable_from(g, s)[t]) return {s, t};
    }
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    const auto seen = reachable_from(g, s);
    for (NodeId t = 0; t < g.node_count(); ++t)
      if (t != s && seen[t]) pairs.emplace_back(s, t);
  }
  if (pairs.empty()) throw Error(ErrorCode::kNoConnectedPair, "graph has no connected ordered pair");
  return pairs[rng.below(pairs.size())];
}

}  // namespace narlab
