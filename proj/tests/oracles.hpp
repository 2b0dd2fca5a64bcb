#pragma once

// Independent test oracles. Everything here recomputes expectations from
// first principles and must stay free of the implementation paths it checks.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "signet/balance.hpp"
#include "signet/matrix.hpp"
#include "signet/random.hpp"
#include "signet/sgraph.hpp"

namespace oracle {

using signet::Matrix;
using signet::Vector;

// Cofactor expansion along the first row; exponential, for n <= ~8.
inline double cofactor_determinant(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a(0, c) == 0.0) continue;
    Matrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t mc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, mc++) = a(i, j);
      }
    }
    det += (c % 2 == 0 ? 1.0 : -1.0) * a(0, c) * cofactor_determinant(minor);
  }
  return det;
}

// Exhaustive gauge search: some D with D B D = |B| entrywise?
inline std::optional<signet::GaugeVector> brute_force_gauge(const signet::SignedDigraph& g) {
  const std::size_t n = g.size();
  const Matrix b = g.adjacency();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    signet::GaugeVector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (mask >> i) & 1 ? -1 : 1;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (d[i] * b(i, j) * d[j] != std::abs(b(i, j))) ok = false;
    if (ok) return d;
  }
  return std::nullopt;
}

// Per-vertex BFS reachability; strongly connected iff every vertex reaches
// every other one.
inline bool bfs_strongly_connected(const signet::DigraphSupport& s) {
  const std::size_t n = s.n;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [i, j] : s.arcs) adj[j].push_back(i);
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue{start};
    seen[start] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.back();
      queue.pop_back();
      for (std::size_t v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          queue.push_back(v);
        }
    }
    if (count != n) return false;
  }
  return true;
}

// Random signed digraph (arbitrary support/sign pattern).
inline signet::SignedDigraph random_digraph(std::size_t n, signet::SplitMix64& rng,
                                            double arc_prob = 0.4) {
  signet::SignedDigraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || rng.uniform() >= arc_prob) continue;
      const double mag = rng.uniform(0.2, 2.0);
      g.set_weight(i, j, rng.coin() ? mag : -mag);
    }
  return g;
}

// Random signed digraph that is balanced by construction: signs from a gauge.
inline signet::SignedDigraph random_balanced_digraph(std::size_t n, signet::SplitMix64& rng,
                                                     double arc_prob = 0.4) {
  signet::GaugeVector d(n);
  for (int& v : d) v = rng.coin() ? 1 : -1;
  signet::SignedDigraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || rng.uniform() >= arc_prob) continue;
      g.set_weight(i, j, d[i] * d[j] * rng.uniform(0.2, 2.0));
    }
  return g;
}

// Largest eigenvalue of a symmetric 1x1/2x2/3x3 matrix in closed form
// (quadratic formula, resp. the trigonometric solution of the cubic).
inline double sym_eig_max_small(const Matrix& s) {
  const std::size_t n = s.rows();
  if (n == 1) return s(0, 0);
  if (n == 2) {
    const double a = s(0, 0), b = s(0, 1), c = s(1, 1);
    return 0.5 * (a + c + std::sqrt((a - c) * (a - c) + 4.0 * b * b));
  }
  const double p1 = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
  const double q = (s(0, 0) + s(1, 1) + s(2, 2)) / 3.0;
  if (p1 == 0.0) return std::max({s(0, 0), s(1, 1), s(2, 2)});
  const double p2 = (s(0, 0) - q) * (s(0, 0) - q) + (s(1, 1) - q) * (s(1, 1) - q) +
                    (s(2, 2) - q) * (s(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix b = s;
  for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
  b *= 1.0 / p;
  double r = cofactor_determinant(b) / 2.0;
  r = std::min(1.0, std::max(-1.0, r));
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi);
}

inline Matrix random_matrix(std::size_t r, std::size_t c, signet::SplitMix64& rng,
                            double lo = -2.0, double hi = 2.0) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline Matrix random_symmetric(std::size_t n, signet::SplitMix64& rng) {
  Matrix m = random_matrix(n, n, rng);
  return (m + m.transpose()) * 0.5;
}

// Random Z-pattern matrix; diagonal offset sweeps both M and non-M cases.
inline Matrix random_z_matrix(std::size_t n, signet::SplitMix64& rng) {
  Matrix z(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      z(i, j) = rng.uniform() < 0.6 ? -rng.uniform(0.1, 1.5) : 0.0;
      off_sum += -z(i, j);
    }
    z(i, i) = off_sum + rng.uniform(-0.8, 1.2);
  }
  return z;
}

}  // namespace oracle
