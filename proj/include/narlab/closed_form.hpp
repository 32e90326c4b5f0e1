#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"
#include "narlab/matrix.hpp"
#include "narlab/trajectory.hpp"
#include "narlab/tropical.hpp"

// Message-passing networks whose weights are fixed analytically so that
// decoder ∘ GIN^k ∘ encoder reproduces k-step reachability and shortest-path
// dynamic programming as h -> 0. Nothing here is trained.

namespace narlab {

struct DenseLayer {
  RealMatrix weight;  // out x in
  RealVec bias;       // out
  bool relu = true;
};

/// Affine layers with optional ReLU. Zero weights contribute nothing even
/// against infinite inputs (0 * inf is taken as 0), so +inf can flow through.
class ReluMlp {
 public:
  ReluMlp() = default;
  explicit ReluMlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (layers_[i].bias.size() != layers_[i].weight.rows())
        throw Error(ErrorCode::kDimensionMismatch, "bias size does not match layer output");
      if (i > 0 && layers_[i].weight.cols() != layers_[i - 1].weight.rows())
        throw Error(ErrorCode::kDimensionMismatch, "layer dimensions do not chain");
    }
  }

  /// Width-1 layer y = relu?(w x + b).
  static DenseLayer scalar_layer(double w, double b, bool relu = true) {
    return {RealMatrix(1, 1, w), RealVec{b}, relu};
  }

  /// Weight 1, bias 0, ReLU: identity on nonnegative inputs.
  static ReluMlp identity(std::size_t depth = 1) {
    return ReluMlp(std::vector<DenseLayer>(depth, scalar_layer(1.0, 0.0)));
  }

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  bool empty() const noexcept { return layers_.empty(); }
  std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().weight.cols(); }

 private:
  std::vector<DenseLayer> layers_;
};

inline RealVec mlp_forward(const ReluMlp& mlp, std::span<const double> x) {
  RealVec cur(x.begin(), x.end());
  for (const auto& layer : mlp.layers()) {
    if (layer.weight.cols() != cur.size()) throw Error(ErrorCode::kDimensionMismatch, "MLP input width mismatch");
    RealVec next(layer.weight.rows());
    for (std::size_t o = 0; o < next.size(); ++o) {
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < cur.size(); ++i) {
        const double w = layer.weight(o, i);
        if (w != 0.0) acc += w * cur[i];
      }
      next[o] = layer.relu ? std::max(0.0, acc) : acc;
    }
    cur = std::move(next);
  }
  return cur;
}

/// Row-wise MLP over an n x d feature matrix.
inline RealMatrix mlp_rows(const ReluMlp& mlp, const RealMatrix& h) {
  if (mlp.empty()) return h;
  RealMatrix out;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto y = mlp_forward(mlp, h.row(r));
    if (r == 0) out = RealMatrix(h.rows(), y.size());
    std::copy(y.begin(), y.end(), out.row(r).begin());
  }
  return out;
}

/// One GIN update MLP((1+eps) H + A H). Row v of A lists the weights of the
/// messages v receives, so A is the transposed adjacency for directed graphs.
inline RealMatrix gin_step(const RealMatrix& a, const RealMatrix& h, double eps, const ReluMlp& mlp) {
  if (!a.square() || a.cols() != h.rows()) throw Error(ErrorCode::kDimensionMismatch, "gin_step shapes do not match");
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (a(i, i) != 0.0) throw Error(ErrorCode::kInvalidArgument, "gin_step expects no self loops in A");
  RealMatrix z(h.rows(), h.cols(), 0.0);
  for (std::size_t v = 0; v < h.rows(); ++v) {
    for (std::size_t c = 0; c < h.cols(); ++c) {
      double acc = (1.0 + eps) * h(v, c);
      for (std::size_t u = 0; u < h.rows(); ++u) {
        const double w = a(v, u);
        if (w != 0.0) acc += w * h(u, c);
      }
      z(v, c) = acc;
    }
  }
  return mlp_rows(mlp, z);
}

/// Shared-parameter GIN applied `steps` times.
struct GinStack {
  double epsilon = 0.0;
  ReluMlp mlp = ReluMlp::identity();
  int steps = 1;

  RealMatrix run(const RealMatrix& a, RealMatrix h) const {
    for (int i = 0; i < steps; ++i) h = gin_step(a, h, epsilon, mlp);
    return h;
  }
};

enum class NetVariant { kReachability, kUnweightedSssp, kWeightedSssp };

inline const char* variant_name(NetVariant v) {
  switch (v) {
    case NetVariant::kReachability: return "reachability";
    case NetVariant::kUnweightedSssp: return "unweighted_sssp";
    case NetVariant::kWeightedSssp: return "weighted_sssp";
  }
  return "unknown";
}

inline NetVariant parse_variant(const std::string& name) {
  for (auto v : {NetVariant::kReachability, NetVariant::kUnweightedSssp, NetVariant::kWeightedSssp})
    if (name == variant_name(v)) return v;
  throw Error(ErrorCode::kInvalidArgument, "unknown net variant '" + name + "'");
}

enum class EncoderKind { kIdentity, kScaleThenQuantise };

/// decoder ∘ GIN^k ∘ encoder with every weight fixed in closed form.
struct ClosedFormNet {
  NetVariant variant = NetVariant::kReachability;
  double h = 1.0;
  EncoderKind encoder = EncoderKind::kIdentity;
  ReluMlp encoder_mlp;  // only for kScaleThenQuantise, applied entry-wise to W
  GinStack gin;
  ReluMlp decoder_mlp;  // applied after d_1

  double radius() const { return precision_radius(h); }

  /// Edge-weight matrix of the processor: A for the unweighted variants,
  /// q_1[MLP_E[W]] (with +inf diagonal) for the weighted one.
  RealMatrix processor_matrix(const GraphInstance& g) const {
    if (encoder == EncoderKind::kIdentity) return g.adjacency_matrix();
    RealMatrix w = g.weight_matrix(kInf);
    for (auto& x : w.data()) x = maslov_q(mlp_forward(encoder_mlp, std::span<const double>(&x, 1))[0], 1.0);
    return w;
  }

  /// Raw decoder outputs for source v (one scalar per node).
  RealVec forward(const GraphInstance& g, NodeId v, bool raw_update = false) const {
    const auto n = static_cast<std::size_t>(g.node_count());
    const RealMatrix agg = processor_matrix(g).transposed();
    RealMatrix feat(n, 1, 0.0);
    feat(v, 0) = 1.0;  // q_h[χ_v]
    if (variant == NetVariant::kUnweightedSssp && !raw_update) {
      // (I + e^{-1/h} A)^k χ_v: the same update with ε = e^{1/h} - 1 folded
      // into the first GIN layer, without overflowing for small h.
      const double c = std::exp(-1.0 / h);
      for (int step = 0; step < gin.steps; ++step) {
        RealMatrix next = feat;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (agg(a, b) != 0.0) next(a, 0) += c * agg(a, b) * feat(b, 0);
        feat = std::move(next);
      }
    } else {
      feat = gin.run(agg, std::move(feat));
    }
    RealVec out(n);
    for (std::size_t u = 0; u < n; ++u) {
      const double d1 = maslov_d(std::max(0.0, feat(u, 0)), 1.0);
      out[u] = mlp_forward(decoder_mlp, std::span<const double>(&d1, 1))[0];
    }
    return out;
  }

  /// Tropical oracle the net approximates: δ(N^k(v)) for reachability,
  /// χ_v ⊙ W^{⊙k} (0 diagonal) for the shortest-path variants.
  RealVec oracle(const GraphInstance& g, NodeId v) const {
    const auto k = static_cast<unsigned>(gin.steps);
    if (variant == NetVariant::kReachability) {
      auto r = trop_propagate(tropical_adjacency(g), v, k);
      for (auto& x : r) x = std::isinf(x) ? 0.0 : 1.0;
      return r;
    }
    TropMatrix w = g.weight_matrix(0.0);
    if (variant == NetVariant::kUnweightedSssp)
      for (auto& x : w.data())
        if (!std::isinf(x) && x != 0.0) x = 1.0;
    return trop_propagate(w, v, k);
  }
};

inline ClosedFormNet build_reachability_net(double h, int k) {
  MaslovParams params(h);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  ClosedFormNet net;
  net.variant = NetVariant::kReachability;
  net.h = params.h();
  net.encoder = EncoderKind::kIdentity;
  net.gin = GinStack{0.0, ReluMlp::identity(), k};
  // relu(1 - h d_1(x)) followed by a ReLU clamp min(1, y) = relu(1 - relu(1 - y)).
  net.decoder_mlp = ReluMlp({ReluMlp::scalar_layer(-h, 1.0), ReluMlp::scalar_layer(-1.0, 1.0),
                             ReluMlp::scalar_layer(-1.0, 1.0)});
  return net;
}

inline ClosedFormNet build_unweighted_sssp_net(double h, int k) {
  MaslovParams params(h);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  ClosedFormNet net;
  net.variant = NetVariant::kUnweightedSssp;
  net.h = params.h();
  net.encoder = EncoderKind::kIdentity;
  // ε = e^{1/h} - 1 overflows for h < 1/709; forward() uses the folded form.
  net.gin = GinStack{std::expm1(1.0 / h), ReluMlp({ReluMlp::scalar_layer(std::exp(-1.0 / h), 0.0)}), k};
  net.decoder_mlp = ReluMlp({ReluMlp::scalar_layer(h, 0.0)});
  return net;
}

inline ClosedFormNet build_weighted_sssp_net(double h, int k) {
  MaslovParams params(h);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  ClosedFormNet net;
  net.variant = NetVariant::kWeightedSssp;
  net.h = params.h();
  net.encoder = EncoderKind::kScaleThenQuantise;
  net.encoder_mlp = ReluMlp({ReluMlp::scalar_layer(1.0 / h, 0.0)});
  net.gin = GinStack{0.0, ReluMlp::identity(), k};
  net.decoder_mlp = ReluMlp({ReluMlp::scalar_layer(h, 0.0)});
  return net;
}

inline ClosedFormNet build_net(NetVariant variant, double h, int k) {
  switch (variant) {
    case NetVariant::kReachability: return build_reachability_net(h, k);
    case NetVariant::kUnweightedSssp: return build_unweighted_sssp_net(h, k);
    case NetVariant::kWeightedSssp: return build_weighted_sssp_net(h, k);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown variant");
}

struct ApproximationError {
  double max_error = 0.0;
  NodeId worst_node = kNoNode;
  RealVec per_node;            // |output - oracle|; NaN where excluded
  std::vector<bool> compared;  // false for masked nodes
};

/// Compares the net against its tropical oracle. Shortest-path variants only
/// score nodes in N^k(v); a decoded value beyond the precision radius means
/// "unreachable" and is masked as well.
inline ApproximationError approximation_error(const ClosedFormNet& net, const GraphInstance& g, NodeId v) {
  const auto out = net.forward(g, v);
  const auto ref = net.oracle(g, v);
  ApproximationError res;
  res.per_node.assign(out.size(), std::nan(""));
  res.compared.assign(out.size(), false);
  for (std::size_t u = 0; u < out.size(); ++u) {
    if (net.variant != NetVariant::kReachability && (std::isinf(ref[u]) || out[u] > net.radius())) continue;
    const double err = std::abs(out[u] - ref[u]);
    res.per_node[u] = err;
    res.compared[u] = true;
    if (res.worst_node == kNoNode || err > res.max_error) {
      res.max_error = err;
      res.worst_node = static_cast<NodeId>(u);
    }
  }
  return res;
}

/// ((I + A)^k)_{vu}: length-k walks from v to u when every node also has a
/// self-loop. For the shortest-path variants the sum aggregation gives
/// 0 <= oracle - output <= h ln N_u on N^k(v).
inline RealVec padded_walk_counts(const GraphInstance& g, NodeId v, int k) {
  const auto n = static_cast<std::size_t>(g.node_count());
  RealVec cur(n, 0.0);
  cur[v] = 1.0;
  for (int step = 0; step < k; ++step) {
    RealVec next = cur;
    for (const auto& e : g.edges()) next[e.tail] += cur[e.head];
    cur = std::move(next);
  }
  return cur;
}

struct BiasCheck {
  bool holds = true;
  NodeId node = kNoNode;  // first violating node
  double gap = 0.0;       // oracle - output there
  double bound = 0.0;     // h ln N there
};

inline BiasCheck check_bias_bound(const ClosedFormNet& net, const GraphInstance& g, NodeId v, double rel_tol = 1e-9) {
  BiasCheck res;
  if (net.variant == NetVariant::kReachability) return res;
  const auto out = net.forward(g, v);
  const auto ref = net.oracle(g, v);
  const auto walks = padded_walk_counts(g, v, net.gin.steps);
  for (std::size_t u = 0; u < out.size(); ++u) {
    if (std::isinf(ref[u]) || out[u] > net.radius()) continue;
    const double gap = ref[u] - out[u];
    const double bound = net.h * std::log(walks[u]);
    const double slack = rel_tol * std::max(1.0, ref[u]);
    if (gap < -slack || gap > bound + slack) return {false, static_cast<NodeId>(u), gap, bound};
  }
  return res;
}

/// Largest h in [lo, hi] (bisection in log space) with max error <= c, or
/// nullopt if even lo misses. Relies on the error being monotone in h.
inline std::optional<double> find_h_threshold(NetVariant variant, int k, const GraphInstance& g, NodeId v, double c,
                                              double lo = 1e-4, double hi = 1.0, int iterations = 40) {
  auto ok = [&](double h) { return approximation_error(build_net(variant, h, k), g, v).max_error <= c; };
  if (ok(hi)) return hi;
  if (!ok(lo)) return std::nullopt;
  double good = std::log(lo);
  double bad = std::log(hi);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (good + bad);
    (ok(std::exp(mid)) ? good : bad) = mid;
  }
  return std::exp(good);
}

namespace detail {

inline Json mlp_to_json(const ReluMlp& mlp) {
  Json layers = Json::array();
  for (const auto& l : mlp.layers()) {
    layers.push_back({{"shape", {l.weight.rows(), l.weight.cols()}},
                      {"weight", reals_to_json(l.weight.data())},
                      {"bias", reals_to_json(l.bias)},
                      {"relu", l.relu}});
  }
  return layers;
}

inline ReluMlp mlp_from_json(const Json& j) {
  std::vector<DenseLayer> layers;
  for (const auto& l : j) {
    const auto rows = l.at("shape").at(0).get<std::size_t>();
    const auto cols = l.at("shape").at(1).get<std::size_t>();
    layers.push_back({RealMatrix(rows, cols, reals_from_json(l.at("weight"))), reals_from_json(l.at("bias")),
                      l.at("relu").get<bool>()});
  }
  return ReluMlp(std::move(layers));
}

}  // namespace detail

/// Audit description of a net: variant, h, k, ε and every layer.
inline Json net_to_json(const ClosedFormNet& net) {
  Json j;
  j["variant"] = variant_name(net.variant);
  j["h"] = net.h;
  j["k"] = net.gin.steps;
  j["encoder"] = net.encoder == EncoderKind::kIdentity ? "identity" : "scale_then_quantise";
  j["encoder_mlp"] = detail::mlp_to_json(net.encoder_mlp);
  j["gin"] = {{"epsilon", real_to_json(net.gin.epsilon)}, {"mlp", detail::mlp_to_json(net.gin.mlp)}};
  j["decoder"] = "dequantise_then_mlp";
  j["decoder_mlp"] = detail::mlp_to_json(net.decoder_mlp);
  return j;
}

inline ClosedFormNet net_from_json(const Json& j) {
  try {
    ClosedFormNet net;
    net.variant = parse_variant(j.at("variant").get<std::string>());
    net.h = MaslovParams(j.at("h").get<double>()).h();
    net.encoder = j.at("encoder").get<std::string>() == "identity" ? EncoderKind::kIdentity
                                                                    : EncoderKind::kScaleThenQuantise;
    net.encoder_mlp = detail::mlp_from_json(j.at("encoder_mlp"));
    net.gin.epsilon = real_from_json(j.at("gin").at("epsilon"));
    net.gin.mlp = detail::mlp_from_json(j.at("gin").at("mlp"));
    net.gin.steps = j.at("k").get<int>();
    net.decoder_mlp = detail::mlp_from_json(j.at("decoder_mlp"));
    return net;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("net JSON: ") + e.what());
  }
}

}  // namespace narlab
