#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/matrix.hpp"

namespace narlab {

using Json = nlohmann::json;

inline constexpr const char* kInfSentinel = "+inf";

/// Reals go out as shortest round-trip JSON numbers; +inf as the "+inf" string.
inline Json real_to_json(double x) {
  if (std::isinf(x) && x > 0) return kInfSentinel;
  if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "only finite reals and +inf are serialisable");
  return x;
}

inline double real_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == kInfSentinel) return kInf;
    throw Error(ErrorCode::kSchemaMismatch, "unexpected string where a real was expected");
  }
  if (!j.is_number()) throw Error(ErrorCode::kSchemaMismatch, "expected a number");
  return j.get<double>();
}

inline Json reals_to_json(const std::vector<double>& xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(real_to_json(x));
  return arr;
}

inline std::vector<double> reals_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kSchemaMismatch, "expected an array of reals");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(real_from_json(x));
  return out;
}

inline Json graph_to_json(const GraphInstance& g) {
  Json j;
  j["n"] = g.node_count();
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.head, e.tail}));
  j["edges"] = std::move(edges);
  j["weights"] = reals_to_json(g.weights());
  if (g.capacities()) j["capacities"] = reals_to_json(*g.capacities());
  if (g.points()) {
    Json pts = Json::array();
    for (const auto& p : *g.points()) pts.push_back(Json::array({p.x, p.y}));
    j["points"] = std::move(pts);
  }
  return j;
}

inline GraphInstance graph_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kSchemaMismatch, "edge must be [u, v]");
      edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
    }
    auto weights = reals_from_json(j.at("weights"));
    std::optional<std::vector<double>> caps;
    if (j.contains("capacities")) caps = reals_from_json(j.at("capacities"));
    std::optional<std::vector<Point>> points;
    if (j.contains("points")) {
      std::vector<Point> pts;
      for (const auto& p : j.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      points = std::move(pts);
    }
    return GraphInstance(n, std::move(edges), std::move(weights), std::move(caps), std::move(points));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("graph JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaMismatch) throw;
    throw Error(ErrorCode::kSchemaMismatch, std::string("graph JSON: ") + e.what());
  }
}

inline Json matrix_to_json(const RealMatrix& m) {
  return Json{{"n", m.rows()}, {"entries", reals_to_json(m.data())}};
}

inline RealMatrix square_matrix_from_json(const Json& j, const char* entries_key = "entries") {
  const auto n = j.at("n").get<std::size_t>();
  auto data = reals_from_json(j.at(entries_key));
  if (data.size() != n * n) throw Error(ErrorCode::kSchemaMismatch, "matrix entries do not match n*n");
  return RealMatrix(n, n, std::move(data));
}

}  // namespace narlab
