#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/executors.hpp"
#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"
#include "narlab/maxflow.hpp"
#include "narlab/random.hpp"
#include "narlab/trajectory.hpp"

namespace narlab {

inline constexpr int kSchemaVersion = 1;

struct Provenance {
  std::string generator;
  Json parameters = Json::object();
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

struct DatasetRecord {
  int schema_version = kSchemaVersion;
  GraphInstance graph{1, {}, {}};
  std::string algorithm = "none";
  std::optional<Trajectory> trajectory;
  Provenance provenance;

  bool operator==(const DatasetRecord&) const = default;
};

namespace detail {

// Kinds of the non-hint fields, used to type empty arrays on read.
inline std::optional<ValueKind> known_field_kind(const std::string& name) {
  static const std::map<std::string, ValueKind> kinds{
      {"s", ValueKind::kInt},        {"t", ValueKind::kInt},        {"start", ValueKind::kInt},
      {"converged_round", ValueKind::kInt}, {"r0", ValueKind::kIntVec}, {"r", ValueKind::kIntVec},
      {"pred", ValueKind::kIntVec},  {"pi", ValueKind::kIntVec},    {"d0", ValueKind::kRealVec},
      {"d", ValueKind::kRealVec},    {"key", ValueKind::kRealVec},  {"F", ValueKind::kRealVec},
      {"C", ValueKind::kRealVec},    {"value", ValueKind::kReal},   {"df", ValueKind::kReal},
      {"popped", ValueKind::kInt},   {"d_or_key", ValueKind::kRealVec}};
  auto it = kinds.find(name);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

inline Json value_to_json(const TrajValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) return real_to_json(x);
        else if constexpr (std::is_same_v<T, RealVec>) return reals_to_json(x);
        else return Json(x);
      },
      v);
}

inline TrajValue value_from_json(const Json& j, std::optional<ValueKind> expected) {
  if (j.is_number_integer()) {
    if (expected == ValueKind::kReal) return j.get<double>();
    return j.get<std::int64_t>();
  }
  if (j.is_number_float() || j.is_string()) return real_from_json(j);
  if (!j.is_array()) throw Error(ErrorCode::kSchemaMismatch, "unsupported value type");
  bool all_int = true;
  for (const auto& x : j) all_int = all_int && x.is_number_integer();
  const bool want_real = expected ? *expected == ValueKind::kRealVec : !j.empty() && !all_int;
  if (j.empty()) return want_real ? TrajValue(RealVec{}) : TrajValue(IntVec{});
  if (all_int && !want_real) return j.get<IntVec>();
  return reals_from_json(j);
}

inline Json values_to_json(const NamedValues& values) {
  Json j = Json::object();
  for (const auto& [name, v] : values) j[name] = value_to_json(v);
  return j;
}

inline NamedValues values_from_json(const Json& j, const std::vector<FieldSpec>* schema = nullptr) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaMismatch, "expected an object of named values");
  NamedValues out;
  for (const auto& [name, v] : j.items()) {
    std::optional<ValueKind> kind = known_field_kind(name);
    if (schema)
      for (const auto& f : *schema)
        if (f.name == name) kind = f.kind;
    out[name] = value_from_json(v, kind);
  }
  return out;
}

}  // namespace detail

inline Json trajectory_to_json(const Trajectory& t) {
  Json hints = Json::array();
  for (const auto& h : t.hints) hints.push_back(detail::values_to_json(h));
  return {{"inputs", detail::values_to_json(t.inputs)},
          {"hints", std::move(hints)},
          {"outputs", detail::values_to_json(t.outputs)}};
}

/// Decodes and checks every hint against the algorithm's declared schema.
inline Trajectory trajectory_from_json(const Json& j, AlgorithmId algo) {
  Trajectory t;
  t.algorithm = algo;
  const auto schema = hint_schema(algo);
  t.inputs = detail::values_from_json(j.at("inputs"));
  t.outputs = detail::values_from_json(j.at("outputs"));
  for (const auto& hj : j.at("hints")) {
    auto h = detail::values_from_json(hj, &schema);
    if (h.size() != schema.size()) throw Error(ErrorCode::kSchemaMismatch, "hint fields do not match the schema");
    for (const auto& f : schema) {
      auto it = h.find(std::string(f.name));
      if (it == h.end() || !value_has_kind(it->second, f.kind))
        throw Error(ErrorCode::kSchemaMismatch, "hint field '" + std::string(f.name) + "' missing or mistyped");
    }
    t.hints.push_back(std::move(h));
  }
  return t;
}

inline Json record_to_json(const DatasetRecord& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["graph"] = graph_to_json(r.graph);
  j["algorithm"] = r.algorithm;
  j["trajectory"] = r.trajectory ? trajectory_to_json(*r.trajectory) : Json(nullptr);
  j["provenance"] = {{"generator", r.provenance.generator},
                     {"parameters", r.provenance.parameters},
                     {"seed", r.provenance.seed}};
  return j;
}

inline DatasetRecord record_from_json(const Json& j) {
  try {
    DatasetRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion)
      throw Error(ErrorCode::kSchemaMismatch, "unsupported schema_version " + std::to_string(r.schema_version));
    r.graph = graph_from_json(j.at("graph"));
    r.algorithm = j.at("algorithm").get<std::string>();
    const auto& tj = j.at("trajectory");
    if (r.algorithm == "none") {
      if (!tj.is_null()) throw Error(ErrorCode::kSchemaMismatch, "algorithm 'none' carries no trajectory");
    } else {
      const auto algo = parse_algorithm(r.algorithm);
      if (!algo) throw Error(ErrorCode::kSchemaMismatch, "unknown algorithm '" + r.algorithm + "'");
      r.trajectory = trajectory_from_json(tj, *algo);
    }
    const auto& p = j.at("provenance");
    r.provenance.generator = p.at("generator").get<std::string>();
    r.provenance.parameters = p.at("parameters");
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, e.what());
  }
}

/// One record per line; returns the number of records written.
inline std::size_t write_dataset(const std::vector<DatasetRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
  return records.size();
}

inline std::vector<DatasetRecord> read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<DatasetRecord> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaMismatch, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaMismatch, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generation

struct GenOptions {
  std::string dist = "er";  // er | 2community | bipartite | euclid
  int n = 16;
  std::optional<double> p;  // er default 0.35, bipartite default 0.5
  int count = 1;
  std::uint64_t seed = 0;
  std::string algo = "none";
};

inline constexpr int kGraphRedraws = 64;

inline GraphInstance draw_graph(const GenOptions& opts, RandomSource& rng) {
  if (opts.dist == "er") return er_graph(opts.n, opts.p.value_or(0.35), rng);
  if (opts.dist == "2community") return two_community_graph(opts.n, rng);
  if (opts.dist == "bipartite") {
    const int left = opts.n / 2;
    return bipartite_graph(left, opts.n - left, opts.p.value_or(0.5), rng);
  }
  if (opts.dist == "euclid") return euclidean_clique(opts.n, rng);
  throw Error(ErrorCode::kInvalidArgument, "unknown distribution '" + opts.dist + "'");
}

inline Trajectory run_algorithm(AlgorithmId algo, const GraphInstance& g, RandomSource& rng) {
  switch (algo) {
    case AlgorithmId::kBfs: return run_bfs(g, static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.node_count()))));
    case AlgorithmId::kBellmanFord:
      return run_bellman_ford(g, static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.node_count()))));
    case AlgorithmId::kDijkstra:
      return run_dijkstra(g, static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.node_count()))));
    case AlgorithmId::kPrim: return run_prim(g, 0);
    case AlgorithmId::kFordFulkerson: {
      const auto [s, t] = reachable_pair(g, rng);
      return ford_fulkerson(g, s, t).trajectory;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

/// Instance i draws from RandomSource(seed).derive(i); a draw the algorithm
/// rejects (disconnected for Prim, no connected pair for Ford-Fulkerson) is
/// replaced by the next draw from the same stream.
inline std::vector<DatasetRecord> generate_records(const GenOptions& opts) {
  if (opts.count < 0) throw Error(ErrorCode::kInvalidArgument, "count must be >= 0");
  std::optional<AlgorithmId> algo;
  if (opts.algo != "none") {
    algo = parse_algorithm(opts.algo);
    if (!algo) throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + opts.algo + "'");
  }
  const RandomSource root(opts.seed);
  std::vector<DatasetRecord> out;
  out.reserve(static_cast<std::size_t>(opts.count));
  for (int i = 0; i < opts.count; ++i) {
    RandomSource rng = root.derive(static_cast<std::uint64_t>(i));
    for (int attempt = 0;; ++attempt) {
      auto g = draw_graph(opts, rng);
      DatasetRecord r{kSchemaVersion, g, opts.algo, std::nullopt, {}};
      try {
        if (algo) r.trajectory = run_algorithm(*algo, g, rng);
      } catch (const Error& e) {
        const bool redraw = e.code() == ErrorCode::kDisconnected || e.code() == ErrorCode::kNoConnectedPair;
        if (!redraw || attempt + 1 >= kGraphRedraws) throw;
        continue;
      }
      r.provenance.generator = opts.dist;
      r.provenance.parameters = {{"n", opts.n}, {"count", opts.count}, {"algo", opts.algo}, {"index", i}};
      if (opts.p) r.provenance.parameters["p"] = *opts.p;
      r.provenance.seed = opts.seed;
      out.push_back(std::move(r));
      break;
    }
  }
  return out;
}

/// Stream for per-record evaluation choices (e.g. A* endpoints).
inline RandomSource record_rng(const DatasetRecord& r, std::uint64_t purpose) {
  const auto index = r.provenance.parameters.value("index", std::uint64_t{0});
  return RandomSource(r.provenance.seed).derive(index).derive(purpose);
}

// ---------------------------------------------------------------------------
// Reports

/// Reals in reports: 9 significant digits.
inline std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

struct RunReport {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation, 0 for a single row
};

inline RunReport aggregate(std::vector<std::string> columns, std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "aggregate needs at least one row");
  RunReport rep;
  const std::size_t m = columns.size();
  rep.mean.assign(m, 0.0);
  rep.stddev.assign(m, 0.0);
  for (const auto& r : rows) {
    if (r.size() != m) throw Error(ErrorCode::kDimensionMismatch, "row width differs from the column count");
    for (std::size_t c = 0; c < m; ++c) rep.mean[c] += r[c];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& x : rep.mean) x /= n;
  if (rows.size() > 1) {
    for (const auto& r : rows)
      for (std::size_t c = 0; c < m; ++c) rep.stddev[c] += (r[c] - rep.mean[c]) * (r[c] - rep.mean[c]);
    for (auto& x : rep.stddev) x = std::sqrt(x / (n - 1.0));
  }
  rep.columns = std::move(columns);
  rep.rows = std::move(rows);
  return rep;
}

inline std::string summary_line(const RunReport& rep) {
  std::string s;
  for (std::size_t c = 0; c < rep.columns.size(); ++c) {
    if (c) s += "  ";
    s += rep.columns[c] + "=" + format_real(rep.mean[c]) + "±" + format_real(rep.stddev[c]);
  }
  return s;
}

/// CSV with a header row; cells are written verbatim.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw Error(ErrorCode::kIo, "CSV write failed");
  }

 private:
  std::ofstream out_;
};

}  // namespace narlab
