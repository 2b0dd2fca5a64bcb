#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "signet/matrix.hpp"
#include "signet/sgraph.hpp"
#include "signet/tolerances.hpp"

namespace signet {

// Per-vertex switching signs, entries +1/-1. D = diag(d) gauges weights as
// d_i * b_ij * d_j.
using GaugeVector = std::vector<int>;

struct BalanceResult {
  bool balanced = false;
  GaugeVector gauge;                 // set when balanced
  std::optional<ArcKey> conflict;    // arc contradicting the forced parity
};

namespace detail {

// Union-find with parity relative to the root. parity(i) == 1 means vertex i
// sits on the opposite side of its root.
class ParityDsu {
 public:
  explicit ParityDsu(std::size_t n) : parent_(n), rel_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::pair<std::size_t, int> find(std::size_t v) {
    int parity = 0;
    std::size_t root = v;
    while (parent_[root] != root) {
      parity ^= rel_[root];
      root = parent_[root];
    }
    // path compression, re-anchoring parities at the root
    std::size_t cur = v;
    int cur_par = parity;
    while (parent_[cur] != root) {
      const std::size_t next = parent_[cur];
      const int next_par = cur_par ^ rel_[cur];
      parent_[cur] = root;
      rel_[cur] = cur_par;
      cur = next;
      cur_par = next_par;
    }
    return {root, parity};
  }

  // Requires parity(a) xor parity(b) == want. Returns false on contradiction.
  bool unite(std::size_t a, std::size_t b, int want) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == want;
    parent_[rb] = ra;
    rel_[rb] = pa ^ pb ^ want;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rel_;
};

}  // namespace detail

// Structural balance over the undirected support: each arc with weight b
// forces d_i * d_j = sgn(b). A parity contradiction means no gauge exists.
// Gauge normalization: the lowest-indexed vertex of each connected component
// gets d = +1 (so isolated vertices get +1).
inline BalanceResult structural_balance(const SignedDigraph& g) {
  const std::size_t n = g.size();
  detail::ParityDsu dsu(n);
  for (const auto& [arc, w] : g.weights()) {
    const int want = w < 0.0 ? 1 : 0;
    if (!dsu.unite(arc.first, arc.second, want)) {
      BalanceResult r;
      r.balanced = false;
      r.conflict = arc;
      return r;
    }
  }
  // Anchor each component at its lowest-indexed vertex; vertex order gives
  // that vertex first, so its parity becomes the component reference.
  BalanceResult r;
  r.balanced = true;
  r.gauge.assign(n, 0);
  std::vector<int> ref(n, -1);  // per root: parity of the lowest-indexed member
  for (std::size_t v = 0; v < n; ++v) {
    auto [root, parity] = dsu.find(v);
    if (ref[root] < 0) ref[root] = parity;
    r.gauge[v] = (parity == ref[root]) ? 1 : -1;
  }
  return r;
}

inline SignedDigraph apply_gauge(const SignedDigraph& g, const GaugeVector& d) {
  if (d.size() != g.size()) throw std::invalid_argument("apply_gauge: dimension mismatch");
  for (int v : d)
    if (v != 1 && v != -1) throw std::invalid_argument("apply_gauge: entries must be +1/-1");
  SignedDigraph out(g.size());
  for (const auto& [arc, w] : g.weights())
    out.set_weight(arc.first, arc.second, d[arc.first] * w * d[arc.second]);
  return out;
}

// True iff D L_B D equals the Laplacian of the absolute-value graph.
inline bool verify_gauge(const SignedDigraph& g, const GaugeVector& d) {
  if (d.size() != g.size()) throw std::invalid_argument("verify_gauge: dimension mismatch");
  Matrix abs_adj = g.adjacency();
  for (std::size_t i = 0; i < abs_adj.rows(); ++i)
    for (std::size_t j = 0; j < abs_adj.cols(); ++j) abs_adj(i, j) = std::abs(abs_adj(i, j));
  const Matrix labs = laplacian(SignedDigraph::from_dense(abs_adj));
  const Matrix lgauged = laplacian(apply_gauge(g, d));
  return max_abs_diff(lgauged, labs) <= tol::mat;
}

inline Matrix gauge_matrix(const GaugeVector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

}  // namespace signet
