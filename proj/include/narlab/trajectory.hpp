#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "narlab/error.hpp"

namespace narlab {

using IntVec = std::vector<std::int64_t>;
using RealVec = std::vector<double>;
using TrajValue = std::variant<std::int64_t, double, IntVec, RealVec>;
using NamedValues = std::map<std::string, TrajValue>;

enum class AlgorithmId { kBfs, kBellmanFord, kDijkstra, kPrim, kFordFulkerson };

inline std::string_view algorithm_name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kBfs: return "bfs";
    case AlgorithmId::kBellmanFord: return "bellman_ford";
    case AlgorithmId::kDijkstra: return "dijkstra";
    case AlgorithmId::kPrim: return "prim";
    case AlgorithmId::kFordFulkerson: return "ford_fulkerson";
  }
  return "unknown";
}

inline std::optional<AlgorithmId> parse_algorithm(std::string_view name) {
  for (auto id : {AlgorithmId::kBfs, AlgorithmId::kBellmanFord, AlgorithmId::kDijkstra, AlgorithmId::kPrim,
                  AlgorithmId::kFordFulkerson}) {
    if (algorithm_name(id) == name) return id;
  }
  return std::nullopt;
}

enum class ValueKind { kInt, kReal, kIntVec, kRealVec };

struct FieldSpec {
  std::string_view name;
  ValueKind kind;
};

/// Per-step hint fields each algorithm must record; part of the dataset format.
inline std::vector<FieldSpec> hint_schema(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kBfs: return {{"r", ValueKind::kIntVec}};
    case AlgorithmId::kBellmanFord: return {{"d", ValueKind::kRealVec}, {"pred", ValueKind::kIntVec}};
    case AlgorithmId::kDijkstra:
    case AlgorithmId::kPrim:
      return {{"popped", ValueKind::kInt}, {"d_or_key", ValueKind::kRealVec}, {"pred", ValueKind::kIntVec}};
    case AlgorithmId::kFordFulkerson:
      return {{"pi", ValueKind::kIntVec}, {"df", ValueKind::kReal}, {"F", ValueKind::kRealVec}};
  }
  return {};
}

/// Inputs, per-step hints and outputs of one algorithm run.
struct Trajectory {
  AlgorithmId algorithm = AlgorithmId::kBfs;
  NamedValues inputs;
  std::vector<NamedValues> hints;
  NamedValues outputs;

  int step_count() const { return static_cast<int>(hints.size()); }

  template <typename T>
  const T& output(const std::string& name) const {
    return get_field<T>(outputs, name);
  }

  template <typename T>
  static const T& get_field(const NamedValues& values, const std::string& name) {
    auto it = values.find(name);
    if (it == values.end()) throw Error(ErrorCode::kSchemaMismatch, "missing field '" + name + "'");
    if (const T* v = std::get_if<T>(&it->second)) return *v;
    throw Error(ErrorCode::kSchemaMismatch, "field '" + name + "' has an unexpected type");
  }

  bool operator==(const Trajectory&) const = default;
};

inline bool value_has_kind(const TrajValue& v, ValueKind kind) {
  switch (kind) {
    case ValueKind::kInt: return std::holds_alternative<std::int64_t>(v);
    case ValueKind::kReal: return std::holds_alternative<double>(v);
    case ValueKind::kIntVec: return std::holds_alternative<IntVec>(v);
    case ValueKind::kRealVec: return std::holds_alternative<RealVec>(v);
  }
  return false;
}

template <typename Range>
IntVec to_int_vec(const Range& xs) {
  IntVec out;
  for (auto x : xs) out.push_back(static_cast<std::int64_t>(x));
  return out;
}

}  // namespace narlab
