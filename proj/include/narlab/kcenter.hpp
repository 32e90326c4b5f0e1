#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"
#include "narlab/trajectory.hpp"

namespace narlab {

inline constexpr double kMaxKCenterSubsets = 1e6;

struct CenterSet {
  std::vector<NodeId> centers;  // ascending
  double objective = kInf;

  bool operator==(const CenterSet&) const = default;
};

/// All-pairs shortest paths (Floyd-Warshall).
inline RealMatrix all_pairs_distances(const GraphInstance& g) {
  auto d = g.weight_matrix(0.0);
  const auto n = d.rows();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isinf(d(i, k))) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
    }
  return d;
}

/// max_v min_{c in centers} dist(c, v).
inline double kcenter_objective(const RealMatrix& dist, const std::vector<NodeId>& centers) {
  if (centers.empty()) throw Error(ErrorCode::kInvalidArgument, "need at least one center");
  double worst = 0.0;
  for (std::size_t v = 0; v < dist.rows(); ++v) {
    double near = kInf;
    for (NodeId c : centers) near = std::min(near, dist(c, v));
    worst = std::max(worst, near);
  }
  return worst;
}

inline double kcenter_objective(const GraphInstance& g, const std::vector<NodeId>& centers) {
  return kcenter_objective(all_pairs_distances(g), centers);
}

inline CenterSet make_center_set(const RealMatrix& dist, std::vector<NodeId> centers) {
  std::sort(centers.begin(), centers.end());
  const double obj = kcenter_objective(dist, centers);
  return {std::move(centers), obj};
}

/// Greedy farthest-point selection starting from `first` (ties by node id).
inline CenterSet gon(const GraphInstance& g, int k, NodeId first = 0) {
  const int n = g.node_count();
  if (k < 1 || k > n) throw Error(ErrorCode::kInvalidArgument, "k must lie in [1, |V|]");
  if (first < 0 || first >= n) throw Error(ErrorCode::kInvalidArgument, "first center out of range");
  const auto dist = all_pairs_distances(g);
  std::vector<NodeId> centers{first};
  RealVec near(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) near[v] = dist(first, v);
  while (static_cast<int>(centers.size()) < k) {
    NodeId far = kNoNode;
    for (int v = 0; v < n; ++v) {
      if (std::find(centers.begin(), centers.end(), v) != centers.end()) continue;
      if (far == kNoNode || near[v] > near[far]) far = v;
    }
    centers.push_back(far);
    for (int v = 0; v < n; ++v) near[v] = std::min(near[v], dist(far, v));
  }
  return make_center_set(dist, std::move(centers));
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// Exhaustive optimum over all C(n, k) center sets (first optimum in
/// lexicographic order).
inline CenterSet brute_force_kcenter(const GraphInstance& g, int k) {
  const int n = g.node_count();
  if (k < 1 || k > n) throw Error(ErrorCode::kInvalidArgument, "k must lie in [1, |V|]");
  if (binomial(n, k) > kMaxKCenterSubsets) throw Error(ErrorCode::kTooLarge, "C(n, k) exceeds 1e6");
  const auto dist = all_pairs_distances(g);
  std::vector<NodeId> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  CenterSet best{pick, kcenter_objective(dist, pick)};
  while (true) {
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    const double obj = kcenter_objective(dist, pick);
    if (obj < best.objective) best = {pick, obj};
  }
  return best;
}

/// The k highest scores; ties go to the smaller node id. Returned ascending.
inline std::vector<NodeId> topk_centers(const RealVec& scores, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > scores.size()) throw Error(ErrorCode::kInvalidArgument, "k exceeds |V|");
  for (double x : scores)
    if (std::isnan(x)) throw Error(ErrorCode::kInvalidArgument, "scores must not be NaN");
  std::vector<NodeId> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
  ids.resize(static_cast<std::size_t>(k));
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline Json centers_to_json(const CenterSet& c) {
  return {{"centers", c.centers}, {"objective", real_to_json(c.objective)}};
}

}  // namespace narlab
