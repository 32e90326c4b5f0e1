#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "narlab/error.hpp"
#include "narlab/graph.hpp"
#include "narlab/matrix.hpp"

// Min-plus semiring <R ∪ {+inf}, min, +, +inf, 0> and the Maslov maps that
// connect it to <R+, +, *, 0, 1>. +inf is IEEE infinity, so min/+ on the
// tropical side are exact.

namespace narlab {

struct TropScalar {
  double value = kInf;

  static constexpr TropScalar zero() { return {kInf}; }  // additive identity
  static constexpr TropScalar one() { return {0.0}; }    // multiplicative identity

  bool is_inf() const { return std::isinf(value) && value > 0; }
  bool operator==(const TropScalar&) const = default;
};

inline TropScalar trop_add(TropScalar a, TropScalar b) { return {std::min(a.value, b.value)}; }
inline TropScalar trop_mul(TropScalar a, TropScalar b) { return {a.value + b.value}; }

inline TropScalar operator+(TropScalar a, TropScalar b) { return trop_add(a, b); }
inline TropScalar operator*(TropScalar a, TropScalar b) { return trop_mul(a, b); }

/// Quantisation temperature. q_h underflows to 0 once x/h passes ~745, so
/// round trips are only promised up to radius() = 700 h.
class MaslovParams {
 public:
  explicit MaslovParams(double h) : h_(h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::kInvalidArgument, "Maslov temperature h must be > 0");
  }
  double h() const noexcept { return h_; }
  double radius() const noexcept { return 700.0 * h_; }

 private:
  double h_;
};

inline double precision_radius(double h) { return 700.0 * h; }

// Evaluated in extended precision, rounded once to double.
inline double maslov_q(double x, double h) {
  if (std::isinf(x) && x > 0) return 0.0;
  return static_cast<double>(std::exp(-static_cast<long double>(x) / static_cast<long double>(h)));
}

inline double maslov_d(double x, double h) {
  if (x < 0.0 || std::isnan(x)) throw Error(ErrorCode::kInvalidArgument, "maslov_d needs x >= 0");
  if (x == 0.0) return kInf;
  return static_cast<double>(-static_cast<long double>(h) * std::log(static_cast<long double>(x)));
}

inline double maslov_q(TropScalar x, const MaslovParams& p) { return maslov_q(x.value, p.h()); }
inline TropScalar maslov_d(double x, const MaslovParams& p) { return {maslov_d(x, p.h())}; }

/// a ⊕_h b = d_h(q_h(a) + q_h(b)), evaluated as a log-sum-exp so it does not
/// underflow to +inf when both operands are far beyond the precision radius.
inline double h_semiring_add(double a, double b, double h) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (std::isinf(lo) && lo > 0) return kInf;
  if (std::isinf(hi)) return lo;
  return lo - h * std::log1p(std::exp(-(hi - lo) / h));
}

/// a ⊙_h b = d_h(q_h(a) q_h(b)); equals a + b.
inline double h_semiring_mul(double a, double b, double h) {
  const double qa = maslov_q(a, h);
  const double qb = maslov_q(b, h);
  return maslov_d(qa * qb, h);
}

using TropMatrix = Matrix<double>;

inline TropMatrix trop_identity(std::size_t n) {
  TropMatrix m(n, n, kInf);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

inline TropMatrix trop_matmul(const TropMatrix& a, const TropMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kDimensionMismatch, "trop_matmul shapes do not chain");
  TropMatrix out(a.rows(), b.cols(), kInf);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (std::isinf(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const double v = aik + b(k, j);
        if (v < out(i, j)) out(i, j) = v;
      }
    }
  }
  return out;
}

/// Row vector times matrix: [v ⊙ M]_j = min_k v_k + M_kj.
inline std::vector<double> trop_vecmat(const std::vector<double>& v, const TropMatrix& m) {
  if (v.size() != m.rows()) throw Error(ErrorCode::kDimensionMismatch, "trop_vecmat shapes do not chain");
  std::vector<double> out(m.cols(), kInf);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    if (std::isinf(v[k])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double x = v[k] + m(k, j);
      if (x < out[j]) out[j] = x;
    }
  }
  return out;
}

/// W^{⊙k}. Powers of two use repeated squaring, other exponents multiply
/// sequentially; k = 0 gives the tropical identity.
inline TropMatrix trop_matpow(const TropMatrix& w, unsigned k) {
  if (!w.square()) throw Error(ErrorCode::kDimensionMismatch, "trop_matpow needs a square matrix");
  if (k == 0) return trop_identity(w.rows());
  TropMatrix acc = w;
  if (std::has_single_bit(k)) {
    for (unsigned p = 1; p < k; p *= 2) acc = trop_matmul(acc, acc);
    return acc;
  }
  for (unsigned i = 1; i < k; ++i) acc = trop_matmul(acc, w);
  return acc;
}

/// χ_s: 0 at s, +inf elsewhere.
inline std::vector<double> indicator_vector(std::size_t n, NodeId s) {
  std::vector<double> chi(n, kInf);
  chi.at(static_cast<std::size_t>(s)) = 0.0;
  return chi;
}

/// χ_s ⊙ W^{⊙steps}, evaluated left to right (one vector-matrix product per step).
inline std::vector<double> trop_propagate(const TropMatrix& w, NodeId s, unsigned steps) {
  auto r = indicator_vector(w.rows(), s);
  for (unsigned i = 0; i < steps; ++i) r = trop_vecmat(r, w);
  return r;
}

/// Distances from s: χ_s ⊙ W_T^{⊙|V|}; +inf when unreachable.
inline std::vector<double> tropical_sssp(const GraphInstance& g, NodeId s) {
  if (g.has_negative_weight()) throw Error(ErrorCode::kNegativeWeight, "tropical_sssp needs nonnegative weights");
  return trop_propagate(g.weight_matrix(0.0), s, static_cast<unsigned>(g.node_count()));
}

/// A_T: 0 on edges and the diagonal, +inf elsewhere.
inline TropMatrix tropical_adjacency(const GraphInstance& g) {
  TropMatrix a = trop_identity(static_cast<std::size_t>(g.node_count()));
  for (const auto& e : g.edges()) a(e.head, e.tail) = 0.0;
  return a;
}

/// Reachability: 0 where reachable from s, +inf otherwise.
inline std::vector<double> tropical_bfs(const GraphInstance& g, NodeId s) {
  return trop_propagate(tropical_adjacency(g), s, static_cast<unsigned>(g.node_count()));
}

}  // namespace narlab
