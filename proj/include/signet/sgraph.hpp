#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "signet/errors.hpp"
#include "signet/matrix.hpp"
#include "signet/tolerances.hpp"

namespace signet {

// Arc index pair. Entry (i, j) is the arc from v_j into v_i, matching the
// adjacency convention b_ij != 0  <=>  arc (v_j, v_i).
using ArcKey = std::pair<std::size_t, std::size_t>;

// Weighted signed digraph over vertices 0..n-1. Weights are stored sparsely;
// zero entries are never stored, self-loops are rejected.
class SignedDigraph {
 public:
  explicit SignedDigraph(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("SignedDigraph: vertex count must be >= 1");
  }

  static SignedDigraph from_dense(const Matrix& b) {
    if (!b.square()) throw std::invalid_argument("SignedDigraph: adjacency not square");
    SignedDigraph g(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(i, j) != 0.0) g.set_weight(i, j, b(i, j));
    return g;
  }

  std::size_t size() const { return n_; }

  void set_weight(std::size_t i, std::size_t j, double w) {
    if (i >= n_ || j >= n_) throw std::invalid_argument("SignedDigraph: vertex out of range");
    if (i == j) throw std::invalid_argument("SignedDigraph: self-loops are not allowed");
    if (!std::isfinite(w)) throw std::invalid_argument("SignedDigraph: weight must be finite");
    if (w == 0.0)
      weights_.erase({i, j});
    else
      weights_[{i, j}] = w;
  }

  double weight(std::size_t i, std::size_t j) const {
    auto it = weights_.find({i, j});
    return it == weights_.end() ? 0.0 : it->second;
  }

  // Lexicographically ordered by (i, j); iteration order is deterministic.
  const std::map<ArcKey, double>& weights() const { return weights_; }

  Matrix adjacency() const {
    Matrix b(n_, n_);
    for (const auto& [arc, w] : weights_) b(arc.first, arc.second) = w;
    return b;
  }

  bool row_is_zero(std::size_t i) const {
    auto it = weights_.lower_bound({i, 0});
    return it == weights_.end() || it->first.first != i;
  }

 private:
  std::size_t n_;
  std::map<ArcKey, double> weights_;
};

// The two coupling topologies over the same vertex set.
struct NetworkPair {
  NetworkPair(SignedDigraph bc_, SignedDigraph bd_)
      : bc(std::move(bc_)), bd(std::move(bd_)) {
    if (bc.size() != bd.size())
      throw std::invalid_argument("NetworkPair: vertex counts differ");
  }
  std::size_t size() const { return bc.size(); }

  SignedDigraph bc;
  SignedDigraph bd;
};

// Arc set of a union graph, independent of weights.
struct DigraphSupport {
  std::size_t n = 0;
  std::set<ArcKey> arcs;  // entry (i, j): arc from v_j into v_i
};

// L(i,i) = sum_k |b_ik|, L(i,j) = -b_ij.
inline Matrix laplacian(const SignedDigraph& g) {
  const std::size_t n = g.size();
  Matrix l(n, n);
  for (const auto& [arc, w] : g.weights()) {
    l(arc.first, arc.second) = -w;
    l(arc.first, arc.first) += std::abs(w);
  }
  return l;
}

// diag of row sums.
inline Matrix degree_matrix(const Matrix& a) {
  Matrix d(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j);
    d(i, i) = s;
  }
  return d;
}

// Entrywise split B = B+ + B- with B+ >= 0 and B- <= 0.
inline std::pair<Matrix, Matrix> pos_neg_split(const SignedDigraph& g) {
  const std::size_t n = g.size();
  Matrix plus(n, n), minus(n, n);
  for (const auto& [arc, w] : g.weights()) {
    if (w > 0.0)
      plus(arc.first, arc.second) = w;
    else
      minus(arc.first, arc.second) = w;
  }
  return {plus, minus};
}

struct ConsistencyResult {
  bool consistent = true;
  std::optional<ArcKey> witness;  // lexicographically smallest violating (i, j)
};

// Sign-consistent iff b^c_ij * b^d_ij >= 0 for every ordered pair.
inline ConsistencyResult sign_consistency(const NetworkPair& pair) {
  // Bc's map is lexicographically ordered, so the first violation found while
  // walking it is the smallest one; arcs absent from Bc cannot violate.
  for (const auto& [arc, wc] : pair.bc.weights()) {
    const double wd = pair.bd.weight(arc.first, arc.second);
    if (wc * wd < 0.0) return {false, arc};
  }
  return {true, std::nullopt};
}

inline DigraphSupport union_support(const NetworkPair& pair) {
  DigraphSupport s;
  s.n = pair.size();
  for (const auto& [arc, w] : pair.bc.weights()) s.arcs.insert(arc);
  for (const auto& [arc, w] : pair.bd.weights()) s.arcs.insert(arc);
  return s;
}

inline DigraphSupport support_of(const SignedDigraph& g) {
  DigraphSupport s;
  s.n = g.size();
  for (const auto& [arc, w] : g.weights()) s.arcs.insert(arc);
  return s;
}

// G(alpha*Bc + beta*Bd). For sign-inconsistent pairs every union arc must
// survive the combination: alpha*b^c + beta*b^d != 0 within the relative
// cancellation tolerance, else the result would not represent the union.
inline SignedDigraph union_adjacency(const NetworkPair& pair, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("union_adjacency: alpha and beta must be positive");
  SignedDigraph g(pair.size());
  for (const auto& arc : union_support(pair).arcs) {
    const double wc = alpha * pair.bc.weight(arc.first, arc.second);
    const double wd = beta * pair.bd.weight(arc.first, arc.second);
    const double w = wc + wd;
    if (std::abs(w) <= tol::cancel * std::max(std::abs(wc), std::abs(wd)))
      throw CancellationError(arc.first, arc.second,
                              "union_adjacency: arc cancels under chosen coefficients");
    g.set_weight(arc.first, arc.second, w);
  }
  return g;
}

// Deterministic coefficients representing the union: alpha = 1 and the
// smallest beta in 1, 2, 3, ... for which no arc cancels.
inline std::pair<double, double> safe_union_coefficients(const NetworkPair& pair) {
  for (double beta = 1.0;; beta += 1.0) {
    try {
      union_adjacency(pair, 1.0, beta);
      return {1.0, beta};
    } catch (const CancellationError&) {
      // forbidden ratio hit; the forbidden set is finite, so scanning ends
    }
  }
}

// Single-pass Tarjan SCC count == 1. Iterative to keep the stack shallow.
inline bool is_strongly_connected(const DigraphSupport& support) {
  const std::size_t n = support.n;
  if (n == 0) throw std::invalid_argument("is_strongly_connected: empty graph");
  if (n == 1) return true;

  std::vector<std::vector<std::size_t>> adj(n);  // arcs j -> i
  for (const auto& [i, j] : support.arcs) adj[j].push_back(i);

  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, scc_count = 0;

  struct Frame {
    std::size_t v;
    std::size_t child = 0;
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call;
    call.push_back({root});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          ++scc_count;
          if (scc_count > 1) return false;
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
          } while (w != f.v);
        }
        const std::size_t v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  return scc_count == 1;
}

// I1: agents with no second-channel neighbors (single-integrator rows);
// I2: agents with no first-channel neighbors (double-integrator rows).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> agent_order_sets(
    const NetworkPair& pair) {
  std::vector<std::size_t> i1, i2;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    if (pair.bd.row_is_zero(i)) i1.push_back(i);
    if (pair.bc.row_is_zero(i)) i2.push_back(i);
  }
  return {i1, i2};
}

}  // namespace signet
