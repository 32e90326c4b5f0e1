// narlab: command-line front end for the narlab headers.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "narlab.hpp"

namespace {

using namespace narlab;

constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

// Heuristic tables from a file: one JSON object per line, line i for record i.
std::vector<HeuristicTable> read_heuristic_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<HeuristicTable> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      out.push_back(heuristic_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaMismatch, path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::pair<NodeId, NodeId> search_pair(const DatasetRecord& r, std::optional<NodeId> fixed_t) {
  auto rng = record_rng(r, 1);
  if (!fixed_t) return reachable_pair(r.graph, rng);
  std::vector<NodeId> sources;
  for (NodeId s = 0; s < r.graph.node_count(); ++s)
    if (s != *fixed_t && reachable_from(r.graph, s)[*fixed_t]) sources.push_back(s);
  if (sources.empty()) throw Error(ErrorCode::kNoPath, "no node reaches the heuristic target");
  return {sources[rng.below(sources.size())], *fixed_t};
}

struct AstarArgs {
  std::string dataset;
  std::string heuristic = "zero";
  std::string report;
  int repeat = 10;
};

int cmd_run_astar(const AstarArgs& a) {
  const auto records = read_dataset(a.dataset);
  std::vector<HeuristicTable> from_file;
  std::optional<double> alpha;
  const std::string& h = a.heuristic;
  if (h.rfind("file:", 0) == 0) {
    from_file = read_heuristic_file(h.substr(5));
    if (from_file.size() != records.size())
      throw Error(ErrorCode::kSchemaMismatch, "heuristic file has " + std::to_string(from_file.size()) +
                                                  " tables for " + std::to_string(records.size()) + " records");
  } else if (h.rfind("scaled:", 0) == 0) {
    try {
      alpha = std::stod(h.substr(7));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad alpha in '" + h + "'");
    }
  } else if (h != "zero" && h != "random") {
    throw Error(ErrorCode::kInvalidArgument, "unknown heuristic '" + h + "'");
  }

  CsvWriter csv(a.report, {"instance_id", "C_edge", "C_node", "GAP", "J_astar", "J_dijkstra", "SPEEDUP"});
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::optional<NodeId> fixed_t;
    if (!from_file.empty()) fixed_t = from_file[i].t;
    const auto [s, t] = search_pair(r, fixed_t);
    HeuristicTable table;
    if (!from_file.empty()) table = from_file[i];
    else if (alpha) table = scaled_exact_heuristic(r.graph, t, *alpha);
    else if (h == "random") table = random_heuristic(r.graph, t, record_rng(r, 2).next_u64());
    else table = HeuristicTable::zero(r.graph.node_count(), t);
    const auto m = evaluate_heuristic(r.graph, s, t, table, a.repeat);
    csv.row({std::to_string(i), format_real(m.c_edge), format_real(m.c_node), format_real(m.gap),
             std::to_string(m.j_astar), std::to_string(m.j_dijkstra), format_real(m.speedup)});
    rows.push_back({m.c_edge, m.c_node, m.gap, static_cast<double>(m.j_astar), static_cast<double>(m.j_dijkstra),
                    m.speedup});
  }
  if (!rows.empty())
    std::cout << summary_line(aggregate({"C_edge", "C_node", "GAP", "J_astar", "J_dijkstra", "SPEEDUP"}, rows)) << '\n';
  std::cout << "instances: " << records.size() << '\n';
  return 0;
}

struct CoArgs {
  std::string method;
  std::string dataset;
  std::string report;
  int k = 2;
  bool greedy_fallback = false;
  bool nearest_neighbor = false;
};

int cmd_run_co(const CoArgs& a) {
  const auto records = read_dataset(a.dataset);
  CsvWriter csv(a.report, {"instance_id", "method", "value", "optimal", "gap"});
  std::vector<std::vector<double>> gaps;
  auto emit = [&](std::size_t i, const std::string& method, double value, std::optional<double> optimal) {
    const double gap = optimal && *optimal > 0.0 ? optimality_gap_co(value, *optimal) : std::nan("");
    csv.row({std::to_string(i), method, format_real(value), optimal ? format_real(*optimal) : "", format_real(gap)});
    if (!std::isnan(gap)) gaps.push_back({gap});
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& g = records[i].graph;
    if (a.method == "christofides" || a.method == "held_karp") {
      std::optional<double> opt;
      if (g.node_count() <= kMaxHeldKarp) opt = held_karp(g).cost;
      if (a.method == "held_karp") {
        if (!opt) throw Error(ErrorCode::kTooLarge, "held_karp is limited to 16 nodes");
        emit(i, "held_karp", *opt, opt);
        continue;
      }
      const auto ch = christofides(g, a.greedy_fallback);
      emit(i, ch.greedy_matching ? "christofides_greedy_matching" : "christofides", ch.tour.cost, opt);
      if (a.nearest_neighbor) emit(i, "nearest_neighbor", nearest_neighbour_tour(g).cost, opt);
    } else {
      std::optional<double> opt;
      if (binomial(g.node_count(), a.k) <= kMaxKCenterSubsets) opt = brute_force_kcenter(g, a.k).objective;
      if (a.method == "bruteforce_kcenter") {
        if (!opt) throw Error(ErrorCode::kTooLarge, "C(n, k) exceeds 1e6");
        emit(i, "bruteforce_kcenter", *opt, opt);
      } else {
        emit(i, "gon", gon(g, a.k).objective, opt);
      }
    }
  }
  if (!gaps.empty()) std::cout << summary_line(aggregate({"gap"}, gaps)) << '\n';
  std::cout << "instances: " << records.size() << '\n';
  return 0;
}

int cmd_decode_tour(const std::string& path, std::size_t width, NodeId start, bool multi) {
  const auto p = pointers_from_json(read_json_file(path));
  BeamOptions opts;
  opts.width = width;
  opts.start = start;
  opts.multi_start = multi;
  std::cout << tour_to_json(beam_search_tour(p, opts)).dump() << '\n';
  return 0;
}

int cmd_decode_centers(const std::string& path, int k) {
  const auto j = read_json_file(path);
  const auto scores = reals_from_json(j.is_object() ? j.at("scores") : j);
  std::cout << Json{{"centers", topk_centers(scores, k)}}.dump() << '\n';
  return 0;
}

int cmd_verify(const std::string& suite, const VerifyOptions& opts) {
  const auto outcomes = run_verify(suite, opts);
  return print_verify_report(std::cout, outcomes) ? 0 : kExitAssertion;
}

int cmd_repair(const std::string& in_path, const std::string& out_path) {
  const auto j = read_json_file(in_path);
  GraphInstance g = graph_from_json(j.at("graph"));
  const auto raw = square_matrix_from_json(j.at("F"));
  const NodeId s = j.at("s").get<NodeId>();
  const NodeId t = j.at("t").get<NodeId>();
  if (raw.rows() != static_cast<std::size_t>(g.node_count()))
    throw Error(ErrorCode::kSchemaMismatch, "F does not match the graph size");
  const auto flow = repair_prediction(g, raw, s, t);
  write_json_file(out_path, {{"F", matrix_to_json(flow.F)},
                             {"s", s},
                             {"t", t},
                             {"value", flow_value(flow)},
                             {"conservation_residual", conservation_residual(flow)},
                             {"capacity_violation", capacity_violation(flow)}});
  std::cout << "flow value " << format_real(flow_value(flow)) << '\n';
  return 0;
}

int cmd_bench(const std::string& suite, int repeat) {
  if (repeat < 1) throw Error(ErrorCode::kInvalidArgument, "--repeat must be >= 1");
  std::vector<std::string> suites = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  for (const auto& name : suites) {
    std::vector<double> ms;
    bool ok = true;
    for (int r = 0; r < repeat; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      for (const auto& o : run_verify(name, {})) ok = ok && o.ok();
      ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(ms.begin(), ms.end());
    std::cout << name << ": median " << format_real(ms[ms.size() / 2]) << " ms over " << repeat << " runs"
              << (ok ? "" : " (checks failed)") << '\n';
  }
  return 0;
}

struct PropsArgs {
  std::string emit;
  double h = 0.02;
  int k = 1;
  std::string out;
  std::string net;
  std::string dataset;
  NodeId source = 0;
};

int cmd_props(const PropsArgs& a) {
  if (!a.emit.empty()) {
    if (a.out.empty()) throw Error(ErrorCode::kInvalidArgument, "--emit needs --out");
    write_json_file(a.out, net_to_json(build_net(parse_variant(a.emit), a.h, a.k)));
    return 0;
  }
  if (a.net.empty() || a.dataset.empty()) throw Error(ErrorCode::kInvalidArgument, "props needs --net and --dataset");
  const auto net = net_from_json(read_json_file(a.net));
  const auto records = read_dataset(a.dataset);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto err = approximation_error(net, records[i].graph, a.source);
    std::cout << "instance " << i << ": max error " << format_real(err.max_error) << " at node " << err.worst_node
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"narlab: tropical algebra, algorithm trajectories, flows, search and combinatorial heuristics"};
  app.require_subcommand(1);
  int status = 0;

  GenOptions gen;
  std::string gen_out;
  double gen_p = -1.0;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a JSON Lines dataset");
  gen_cmd->add_option("--dist", gen.dist, "Distribution")
      ->required()
      ->check(CLI::IsMember({"er", "2community", "bipartite", "euclid"}));
  gen_cmd->add_option("--n", gen.n, "Nodes per instance")->required();
  gen_cmd->add_option("--p", gen_p, "Edge probability");
  gen_cmd->add_option("--count", gen.count, "Number of instances")->required();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->required();
  gen_cmd->add_option("--algo", gen.algo, "Algorithm to record")
      ->required()
      ->check(CLI::IsMember({"bfs", "bellman_ford", "dijkstra", "prim", "ford_fulkerson", "none"}));
  gen_cmd->add_option("--out", gen_out, "Output path")->required();
  gen_cmd->callback([&] {
    if (gen_p >= 0.0) gen.p = gen_p;
    const auto n = write_dataset(generate_records(gen), gen_out);
    std::cout << "wrote " << n << " records to " << gen_out << '\n';
  });

  auto* run_cmd = app.add_subcommand("run", "Run a search or heuristic over a dataset");
  run_cmd->require_subcommand(1);
  AstarArgs astar_args;
  auto* astar_cmd = run_cmd->add_subcommand("astar", "A* with a heuristic table");
  astar_cmd->add_option("--dataset", astar_args.dataset)->required();
  astar_cmd->add_option("--heuristic", astar_args.heuristic, "zero | random | scaled:ALPHA | file:PATH");
  astar_cmd->add_option("--report", astar_args.report)->required();
  astar_cmd->add_option("--repeat", astar_args.repeat, "Timing repetitions for SPEEDUP");
  astar_cmd->callback([&] { status = cmd_run_astar(astar_args); });

  CoArgs co_args;
  for (const char* method : {"christofides", "gon", "held_karp", "bruteforce_kcenter"}) {
    auto* sub = run_cmd->add_subcommand(method, std::string("Run ") + method);
    sub->add_option("--dataset", co_args.dataset)->required();
    sub->add_option("--report", co_args.report)->required();
    sub->add_option("--k", co_args.k, "Number of centers");
    if (std::string(method) == "christofides") {
      sub->add_flag("--greedy-fallback", co_args.greedy_fallback, "Greedy matching above 20 odd nodes (no 1.5 bound)");
      sub->add_flag("--nearest-neighbor", co_args.nearest_neighbor, "Also report the nearest-neighbour tour");
    }
    sub->callback([&, method] {
      co_args.method = method;
      status = cmd_run_co(co_args);
    });
  }

  auto* decode_cmd = app.add_subcommand("decode", "Decode network outputs");
  decode_cmd->require_subcommand(1);
  std::string pointers_path;
  std::size_t width = 1;
  NodeId start = 0;
  bool multi_start = false;
  auto* tour_cmd = decode_cmd->add_subcommand("tour", "Beam search over a pointer matrix");
  tour_cmd->add_option("--pointers", pointers_path)->required();
  tour_cmd->add_option("--width", width)->required();
  tour_cmd->add_option("--start", start);
  tour_cmd->add_flag("--multi-start", multi_start, "Run from every start and keep the best");
  tour_cmd->callback([&] { status = cmd_decode_tour(pointers_path, width, start, multi_start); });
  std::string scores_path;
  int centers_k = 1;
  auto* centers_cmd = decode_cmd->add_subcommand("centers", "Top-k node scores");
  centers_cmd->add_option("--scores", scores_path)->required();
  centers_cmd->add_option("--k", centers_k)->required();
  centers_cmd->callback([&] { status = cmd_decode_centers(scores_path, centers_k); });

  std::string suite = "all";
  VerifyOptions vopts;
  int verify_k = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run self-check suites");
  verify_cmd->set_help_flag("--help");  // frees -h/--h for the temperature
  verify_cmd->add_option("--suite", suite)->check(CLI::IsMember({"tropical", "props", "duality", "planning", "co", "all"}));
  verify_cmd->add_option("--h", vopts.h, "Temperature for the props spot check");
  verify_cmd->add_option("--k", verify_k, "GIN steps (default: source eccentricity)");
  verify_cmd->add_option("--seed", vopts.seed);
  verify_cmd->callback([&] {
    if (verify_k > 0) vopts.k = verify_k;
    status = cmd_verify(suite, vopts);
  });

  std::string repair_in, repair_out;
  auto* repair_cmd = app.add_subcommand("repair-flow", "antisymmetrize, tanh-clamp and repair a predicted flow");
  repair_cmd->add_option("--in", repair_in)->required();
  repair_cmd->add_option("--out", repair_out)->required();
  repair_cmd->callback([&] { status = cmd_repair(repair_in, repair_out); });

  std::string bench_suite = "all";
  int bench_repeat = 3;
  auto* bench_cmd = app.add_subcommand("bench", "Time the verify suites");
  bench_cmd->add_option("--suite", bench_suite)->check(CLI::IsMember({"tropical", "props", "duality", "planning", "co", "all"}));
  bench_cmd->add_option("--repeat", bench_repeat);
  bench_cmd->callback([&] { status = cmd_bench(bench_suite, bench_repeat); });

  PropsArgs props;
  auto* props_cmd = app.add_subcommand("props", "Emit or evaluate closed-form nets");
  props_cmd->set_help_flag("--help");
  props_cmd->add_option("--emit", props.emit, "reachability | unweighted_sssp | weighted_sssp");
  props_cmd->add_option("--h", props.h);
  props_cmd->add_option("--k", props.k);
  props_cmd->add_option("--out", props.out);
  props_cmd->add_option("--net", props.net);
  props_cmd->add_option("--dataset", props.dataset);
  props_cmd->add_option("--source", props.source);
  props_cmd->callback([&] { status = cmd_props(props); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "narlab: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kIo:
      case ErrorCode::kSchemaMismatch: return kExitIo;
      case ErrorCode::kInvalidArgument: return kExitUsage;
      default: return kExitAssertion;
    }
  } catch (const Json::exception& e) {
    std::cerr << "narlab: " << e.what() << '\n';
    return kExitIo;
  }
  return status;
}
