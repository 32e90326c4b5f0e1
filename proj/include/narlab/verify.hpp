#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "narlab/astar.hpp"
#include "narlab/closed_form.hpp"
#include "narlab/dataset.hpp"
#include "narlab/executors.hpp"
#include "narlab/kcenter.hpp"
#include "narlab/maxflow.hpp"
#include "narlab/tropical.hpp"
#include "narlab/tsp.hpp"
#include "narlab/wl.hpp"

// Self-checks behind `narlab verify`. Output is a pure function of the
// options: no timings, fixed instance streams.

namespace narlab {

struct VerifyOptions {
  double h = 0.02;
  std::optional<int> k;  // default: hop eccentricity of the source
  std::uint64_t seed = 0;
};

struct SuiteOutcome {
  std::string suite;
  int checks = 0;
  int failures = 0;
  std::vector<std::string> notes;
  std::optional<Json> counterexample;

  bool ok() const { return failures == 0; }
};

class Checker {
 public:
  explicit Checker(SuiteOutcome& out) : out_(out) {}

  bool check(bool ok, const std::string& what, const std::function<Json()>& instance) {
    ++out_.checks;
    if (!ok) {
      ++out_.failures;
      if (!out_.counterexample) out_.counterexample = Json{{"suite", out_.suite}, {"check", what}, {"instance", instance()}};
    }
    return ok;
  }

  void note(std::string line) { out_.notes.push_back(std::move(line)); }

 private:
  SuiteOutcome& out_;
};

/// Distance in units in the last place between two nonnegative doubles.
inline std::uint64_t ulp_distance(double a, double b) {
  const auto ia = std::bit_cast<std::uint64_t>(a);
  const auto ib = std::bit_cast<std::uint64_t>(b);
  return ia > ib ? ia - ib : ib - ia;
}

/// Uniform on the grid {0, 2^-20, ..., 100}; sums of two grid points are exact.
inline double dyadic_uniform(RandomSource& rng, double hi = 100.0) {
  const auto steps = static_cast<std::uint64_t>(hi * 1048576.0);
  return static_cast<double>(rng.below(steps + 1)) * 0x1.0p-20;
}

namespace detail {

inline Json sample_json(double a, double b, double h) { return {{"a", a}, {"b", b}, {"h", h}}; }

inline int hop_eccentricity(const GraphInstance& g, NodeId v) { return run_bfs(g, v).step_count(); }

inline std::vector<GraphInstance> props_graphs(RandomSource& rng, int per_family) {
  std::vector<GraphInstance> out;
  for (int i = 0; i < per_family; ++i) {
    const int n = 4 + static_cast<int>(rng.below(9));
    std::vector<double> w(static_cast<std::size_t>(n - 1));
    for (auto& x : w) x = rng.uniform();
    out.push_back(path_graph(w));
    w.push_back(rng.uniform());
    out.push_back(cycle_graph(w));
    out.push_back(er_graph(16, 0.35, rng));
    out.push_back(euclidean_clique(10, rng));
  }
  return out;
}

inline std::vector<int> shuffled(int n, RandomSource& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return p;
}

}  // namespace detail

inline SuiteOutcome verify_tropical(const VerifyOptions& opts) {
  SuiteOutcome out;
  out.suite = "tropical";
  Checker ck(out);
  RandomSource rng = RandomSource(opts.seed).derive(1);
  for (double h : {1.0, 0.1, 0.01}) {
    double worst_h = 0.0;
    double worst_half = 0.0;
    for (int i = 0; i < 600; ++i) {
      const double a = dyadic_uniform(rng);
      const double b = dyadic_uniform(rng);
      ck.check(ulp_distance(maslov_q(a + b, h), maslov_q(a, h) * maslov_q(b, h)) <= 2, "q_h homomorphism within 2 ULP",
               [&] { return detail::sample_json(a, b, h); });
      if (a <= precision_radius(h)) {
        const double back = maslov_d(maslov_q(a, h), h);
        ck.check(std::abs(back - a) <= 1e-12 * a, "d_h(q_h(x)) = x", [&] { return detail::sample_json(a, b, h); });
      }
      const double err = std::abs(h_semiring_add(a, b, h) - std::min(a, b));
      const double err_half = std::abs(h_semiring_add(a, b, h / 2) - std::min(a, b));
      ck.check(err <= h * std::log(2.0) * (1 + 1e-12), "h-sum within h ln 2 of min",
               [&] { return detail::sample_json(a, b, h); });
      worst_h = std::max(worst_h, err);
      worst_half = std::max(worst_half, err_half);
    }
    ck.check(worst_half <= worst_h, "h-sum error shrinks with h", [&] { return Json{{"h", h}}; });
  }

  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(rng.below(31));
    const auto g = er_graph(n, 0.2, rng);
    const NodeId s = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    const auto bf = run_bellman_ford(g, s).output<RealVec>("d");
    ck.check(tropical_sssp(g, s) == bf, "tropical SSSP equals Bellman-Ford", [&] { return graph_to_json(g); });
    ck.check(run_dijkstra(g, s).output<RealVec>("d") == bf, "Dijkstra equals Bellman-Ford",
             [&] { return graph_to_json(g); });
    const auto r = run_bfs(g, s).output<IntVec>("r");
    const auto tr = tropical_bfs(g, s);
    bool same = true;
    for (int v = 0; v < n; ++v) same = same && ((r[v] == 1) == (tr[v] == 0.0));
    ck.check(same, "tropical reachability equals BFS", [&] { return graph_to_json(g); });
  }

  for (int i = 0; i < 10; ++i) {
    const int n = 3 + static_cast<int>(rng.below(6));
    TropMatrix w(static_cast<std::size_t>(n), static_cast<std::size_t>(n), kInf);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) w(a, b) = a == b ? 0.0 : (rng.bernoulli(0.5) ? static_cast<double>(rng.below(10)) : kInf);
    TropMatrix seq = trop_identity(static_cast<std::size_t>(n));
    for (int p = 0; p < 8; ++p) seq = trop_matmul(seq, w);
    ck.check(trop_matpow(w, 8) == seq, "repeated squaring equals sequential powers",
             [&] { return matrix_to_json(w); });
  }
  return out;
}

/// Closed-form nets: h-sweep monotonicity, the h ln N bias sandwich for the
/// shortest-path variants, exact Dirac output for reachability at opts.h.
inline SuiteOutcome verify_props(const VerifyOptions& opts) {
  SuiteOutcome out;
  out.suite = "props";
  Checker ck(out);
  RandomSource rng = RandomSource(opts.seed).derive(2);
  const auto graphs = detail::props_graphs(rng, 3);
  const double sweep[] = {0.8, 0.4, 0.2, 0.1, 0.05, 0.02};
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    const NodeId v = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.node_count())));
    const int k = opts.k.value_or(std::max(1, detail::hop_eccentricity(g, v)));
    auto instance = [&](double h) { return Json{{"graph", graph_to_json(g)}, {"v", v}, {"k", k}, {"h", h}}; };
    for (auto variant : {NetVariant::kReachability, NetVariant::kUnweightedSssp, NetVariant::kWeightedSssp}) {
      double prev = kInf;
      for (double h : sweep) {
        const auto net = build_net(variant, h, k);
        const auto err = approximation_error(net, g, v);
        ck.check(err.max_error <= prev + 1e-12, std::string(variant_name(variant)) + " error non-increasing as h halves",
                 [&] { return instance(h); });
        prev = err.max_error;
        const auto bias = check_bias_bound(net, g, v);
        ck.check(bias.holds, std::string(variant_name(variant)) + " within [0, h ln N] of the oracle",
                 [&] { return instance(h); });
      }
      const auto err = approximation_error(build_net(variant, opts.h, k), g, v);
      if (variant == NetVariant::kReachability)
        ck.check(err.max_error <= 1e-5, "reachability decoder is a Dirac indicator", [&] { return instance(opts.h); });
      else
        ck.note("graph " + std::to_string(gi) + " " + variant_name(variant) + " max error at h=" + format_real(opts.h) +
                ": " + format_real(err.max_error));
    }
  }
  return out;
}

inline SuiteOutcome verify_duality(const VerifyOptions& opts) {
  SuiteOutcome out;
  out.suite = "duality";
  Checker ck(out);
  RandomSource rng = RandomSource(opts.seed).derive(3);
  for (int i = 0; i < 20; ++i) {
    const bool bip = i % 2 == 1;
    GraphInstance g = bip ? matching_network(bipartite_graph(8, 8, 0.3, rng, true), 8) : two_community_graph(16, rng);
    NodeId s = 16, t = 17;
    if (!bip) std::tie(s, t) = reachable_pair(g, rng);
    const auto cert = certify_duality(g, s, t, rng.next_u64());
    auto instance = [&] { return Json{{"graph", graph_to_json(g)}, {"s", s}, {"t", t}}; };
    ck.check(cert.verdict == DualityVerdict::kStrong, "max-flow value equals min-cut weight", instance);
    ck.check(cert.weak_duality_holds, "no flow exceeds any cut", instance);
    if (bip) ck.check(cert.primal == std::round(cert.primal), "unit-capacity flow is integral", instance);

    auto flow = ford_fulkerson(g, s, t).flow;
    const double before = flow_value(flow);
    RealMatrix noisy = flow.F;
    for (auto& x : noisy.data()) x += rng.uniform(-0.5, 0.5);
    const auto repaired = repair_prediction(g, noisy, s, t);
    ck.check(conservation_residual(repaired) <= kConservationTol, "repaired flow is conserved", instance);
    ck.check(capacity_violation(repaired) <= kCapacityTol, "repaired flow respects capacities", instance);
    const auto clamped = FlowState{tanh_clamp(antisymmetrize(noisy), g.capacity_matrix()), g.capacity_matrix(), s, t};
    ck.check(flow_value(repaired) <= flow_value(clamped) + 1e-12, "repair never increases the flow value", instance);
    ck.check(flow_value(repaired) <= before + 1e-9, "repaired value stays below the maximum", instance);
  }
  return out;
}

inline SuiteOutcome verify_planning(const VerifyOptions& opts) {
  SuiteOutcome out;
  out.suite = "planning";
  Checker ck(out);
  RandomSource rng = RandomSource(opts.seed).derive(4);
  const int n = 32;
  for (double p : {sparse_probability(n), 0.35, 0.5}) {
    for (int i = 0; i < 5; ++i) {
      const auto g = er_graph(n, p, rng);
      const auto [s, t] = reachable_pair(g, rng);
      auto instance = [&] { return Json{{"graph", graph_to_json(g)}, {"s", s}, {"t", t}}; };
      const auto ref = dijkstra_search(g, s, t);
      int prev_j = g.node_count() + 1;
      for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
        const auto h = scaled_exact_heuristic(g, t, alpha);
        const auto c = consistency_fraction(g, h);
        ck.check(c.edge == 1.0 && c.node == 1.0, "scaled exact heuristic is consistent", instance);
        ck.check(admissibility_check(g, h, t).holds, "scaled exact heuristic is admissible", instance);
        const auto res = astar(g, s, t, h);
        ck.check(res.cost == ref.cost, "A* cost is optimal", instance);
        ck.check(res.iterations <= prev_j, "A* iterations non-increasing in alpha", instance);
        ck.check(res.reopened == 0, "no node reopened under a consistent heuristic", instance);
        prev_j = res.iterations;
        if (alpha == 0.0) {
          const auto traj = run_dijkstra(g, s);
          bool same = true;
          for (std::size_t j = 0; j < res.pop_sequence.size(); ++j)
            same = same && traj.get_field<std::int64_t>(traj.hints[j], "popped") == res.pop_sequence[j];
          ck.check(same, "zero heuristic pops in Dijkstra order", instance);
        }
      }
    }
  }
  return out;
}

inline SuiteOutcome verify_co(const VerifyOptions& opts) {
  SuiteOutcome out;
  out.suite = "co";
  Checker ck(out);
  RandomSource rng = RandomSource(opts.seed).derive(5);
  double gap_sum = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto g = euclidean_clique(8, rng);
    const auto ch = christofides(g);
    const auto opt = held_karp(g);
    auto instance = [&] { return graph_to_json(g); };
    ck.check(is_valid_tour(8, ch.tour.order), "Christofides returns a Hamiltonian cycle", instance);
    ck.check(ch.tour.cost <= 1.5 * opt.cost * (1 + 1e-12), "Christofides within 1.5 of optimal", instance);
    ck.check(opt.cost <= ch.tour.cost * (1 + 1e-12), "Held-Karp is a lower bound", instance);
    gap_sum += optimality_gap_co(ch.tour.cost, opt.cost);
  }
  ck.note("christofides mean gap (n=8): " + format_real(gap_sum / 10));

  for (int i = 0; i < 10; ++i) {
    GraphInstance g = er_graph(10, 0.5, rng);
    while (!std::all_of(reachable_from(g, 0).begin(), reachable_from(g, 0).end(), [](bool b) { return b; }))
      g = er_graph(10, 0.5, rng);
    for (int k : {2, 3}) {
      const auto best = brute_force_kcenter(g, k);
      for (NodeId first : {0, 4, 9}) {
        const auto c = gon(g, k, first);
        ck.check(c.objective <= 2.0 * best.objective * (1 + 1e-12), "Gon within 2 of optimal",
                 [&] { return Json{{"graph", graph_to_json(g)}, {"k", k}, {"first", first}}; });
      }
    }
  }

  for (int i = 0; i < 100; ++i) {
    const auto n = static_cast<std::size_t>(1 + rng.below(8));
    PointerMatrix p(n, n);
    for (auto& x : p.data()) x = rng.bernoulli(0.2) ? 0.0 : rng.uniform();
    BeamOptions bo;
    bo.width = 1 + rng.below(6);
    bo.start = static_cast<NodeId>(rng.below(n));
    const auto tour = beam_search_tour(p, bo);
    ck.check(is_valid_tour(n, tour.order), "beam search yields a Hamiltonian cycle",
             [&] { return Json{{"pointers", pointers_to_json(p)}, {"width", bo.width}, {"start", bo.start}}; });
  }
  for (int i = 0; i < 10; ++i) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const auto cycle = detail::shuffled(n, rng);
    PointerMatrix p(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) p(cycle[j], cycle[(j + 1) % n]) = 1.0;
    BeamOptions bo;
    bo.start = cycle[0];
    bo.width = 3;
    ck.check(beam_search_tour(p, bo).order == cycle, "one-hot pointers decode to their tour",
             [&] { return pointers_to_json(p); });
  }
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"tropical", "props", "duality", "planning", "co"};
  return names;
}

inline std::vector<SuiteOutcome> run_verify(const std::string& suite, const VerifyOptions& opts) {
  std::vector<SuiteOutcome> out;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  if (want("tropical")) out.push_back(verify_tropical(opts));
  if (want("props")) out.push_back(verify_props(opts));
  if (want("duality")) out.push_back(verify_duality(opts));
  if (want("planning")) out.push_back(verify_planning(opts));
  if (want("co")) out.push_back(verify_co(opts));
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + suite + "'");
  return out;
}

/// Writes the report; returns true iff every suite passed.
inline bool print_verify_report(std::ostream& os, const std::vector<SuiteOutcome>& outcomes) {
  bool all_ok = true;
  for (const auto& o : outcomes) {
    os << "suite " << o.suite << ": " << o.checks << " checks, " << o.failures << " failures\n";
    for (const auto& n : o.notes) os << "  " << n << '\n';
    if (o.counterexample) os << "  counterexample: " << o.counterexample->dump() << '\n';
    all_ok = all_ok && o.ok();
  }
  os << (all_ok ? "PASS" : "FAIL") << '\n';
  return all_ok;
}

}  // namespace narlab
