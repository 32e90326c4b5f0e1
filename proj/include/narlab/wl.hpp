#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "narlab/graph.hpp"

namespace narlab {

/// Per-round node colours of 1-WL refinement. Colour ids are consecutive from
/// 0 in every round and canonical: they depend only on the coloured structure,
/// never on node numbering.
struct ColorRefinement {
  std::vector<std::vector<int>> rounds;
  int converged_round = 0;

  const std::vector<int>& final_colors() const { return rounds.at(static_cast<std::size_t>(converged_round)); }

  int class_count(std::size_t round) const {
    const auto& c = rounds.at(round);
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
  }
};

enum class WlVerdict { kNotIsomorphic, kPossiblyIsomorphic };

namespace detail {

using WlSignature = std::pair<int, std::vector<int>>;

inline WlSignature wl_signature(const GraphInstance& g, const std::vector<int>& colors, NodeId v) {
  std::vector<int> neigh;
  neigh.reserve(g.out_arcs(v).size());
  for (const auto& arc : g.out_arcs(v)) neigh.push_back(colors[arc.to]);
  std::sort(neigh.begin(), neigh.end());
  return {colors[v], std::move(neigh)};
}

// One refinement step over several graphs sharing a relabelling table. New
// ids are the ranks of the distinct signatures, so the map is injective and
// independent of node order.
inline std::vector<std::vector<int>> wl_step(std::span<const GraphInstance* const> graphs,
                                             const std::vector<std::vector<int>>& colors) {
  std::vector<std::vector<WlSignature>> sigs(graphs.size());
  std::map<WlSignature, int> table;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (NodeId v = 0; v < graphs[i]->node_count(); ++v) {
      sigs[i].push_back(wl_signature(*graphs[i], colors[i], v));
      table.emplace(sigs[i].back(), 0);
    }
  }
  int next = 0;
  for (auto& [sig, id] : table) id = next++;
  std::vector<std::vector<int>> out(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (const auto& sig : sigs[i]) out[i].push_back(table.at(sig));
  return out;
}

inline int distinct_count(const std::vector<std::vector<int>>& colors) {
  int hi = -1;
  for (const auto& c : colors)
    for (int x : c) hi = std::max(hi, x);
  return hi + 1;
}

inline std::vector<int> histogram(const std::vector<int>& colors, int palette) {
  std::vector<int> h(static_cast<std::size_t>(palette), 0);
  for (int c : colors) ++h[static_cast<std::size_t>(c)];
  return h;
}

}  // namespace detail

/// Refines from the uniform colouring until the partition stops changing
/// (at most |V| rounds). converged_round is the first round whose partition
/// equals the previous one.
inline ColorRefinement wl_refine(const GraphInstance& g) {
  ColorRefinement out;
  std::vector<std::vector<int>> colors{std::vector<int>(static_cast<std::size_t>(g.node_count()), 0)};
  out.rounds.push_back(colors[0]);
  const GraphInstance* graphs[] = {&g};
  for (int round = 1; round <= g.node_count(); ++round) {
    const int before = detail::distinct_count(colors);
    colors = detail::wl_step(graphs, colors);
    out.rounds.push_back(colors[0]);
    // Refinement only splits classes, so equal class counts mean equal partitions.
    if (detail::distinct_count(colors) == before) {
      out.converged_round = round;
      return out;
    }
  }
  out.converged_round = static_cast<int>(out.rounds.size()) - 1;
  return out;
}

/// 1-WL test with a shared relabelling table. kNotIsomorphic is always
/// correct; kPossiblyIsomorphic can be wrong (e.g. C6 against two triangles).
inline WlVerdict wl_test(const GraphInstance& g1, const GraphInstance& g2) {
  if (g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count()) return WlVerdict::kNotIsomorphic;
  const GraphInstance* graphs[] = {&g1, &g2};
  std::vector<std::vector<int>> colors{std::vector<int>(static_cast<std::size_t>(g1.node_count()), 0),
                                       std::vector<int>(static_cast<std::size_t>(g2.node_count()), 0)};
  int classes = 1;
  for (int round = 1; round <= g1.node_count() + 1; ++round) {
    colors = detail::wl_step(graphs, colors);
    const int palette = detail::distinct_count(colors);
    if (detail::histogram(colors[0], palette) != detail::histogram(colors[1], palette))
      return WlVerdict::kNotIsomorphic;
    if (palette == classes) break;
    classes = palette;
  }
  return WlVerdict::kPossiblyIsomorphic;
}

/// Copy of g with node v renamed to perm[v].
inline GraphInstance relabel(const GraphInstance& g, const std::vector<NodeId>& perm) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back({perm[e.head], perm[e.tail]});
  std::optional<std::vector<Point>> points;
  if (g.points()) {
    std::vector<Point> pts(g.points()->size());
    for (std::size_t v = 0; v < pts.size(); ++v) pts[perm[v]] = (*g.points())[v];
    points = std::move(pts);
  }
  return GraphInstance(g.node_count(), std::move(edges), g.weights(), g.capacities(), std::move(points));
}

}  // namespace narlab
