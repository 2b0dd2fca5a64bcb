#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/balance.hpp"
#include "signet/random.hpp"
#include "signet/sgraph.hpp"

namespace signet {

// Randomized pair families with guaranteed theorem hypotheses, used by the
// verification harness and the randomized test suites.
enum class PairFamily { ConsistentBalanced, ConsistentUnbalanced, Inconsistent };

inline PairFamily pair_family_from_name(const std::string& name) {
  if (name == "consistent-balanced") return PairFamily::ConsistentBalanced;
  if (name == "consistent-unbalanced") return PairFamily::ConsistentUnbalanced;
  if (name == "inconsistent") return PairFamily::Inconsistent;
  throw std::invalid_argument("unknown family: " + name);
}

inline std::string pair_family_name(PairFamily family) {
  switch (family) {
    case PairFamily::ConsistentBalanced: return "consistent-balanced";
    case PairFamily::ConsistentUnbalanced: return "consistent-unbalanced";
    default: return "inconsistent";
  }
}

namespace detail {

// Union support skeleton: a random Hamiltonian cycle keeps the union strongly
// connected no matter how arcs are distributed between the two layers, plus a
// few extra arcs for variety.
inline std::vector<ArcKey> random_support(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<ArcKey> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t from = order[i];
    const std::size_t to = order[(i + 1) % n];
    arcs.push_back({to, from});  // entry (head, tail)
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.uniform() < 0.25 &&
          std::find(arcs.begin(), arcs.end(), ArcKey{i, j}) == arcs.end())
        arcs.push_back({i, j});
    }
  return arcs;
}

}  // namespace detail

inline NetworkPair random_pair(PairFamily family, std::size_t n, SplitMix64& rng) {
  if (n < 2) throw std::invalid_argument("random_pair: need n >= 2");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const auto arcs = detail::random_support(n, rng);

    GaugeVector gauge(n);
    for (int& d : gauge) d = rng.coin() ? 1 : -1;
    gauge[0] = 1;

    SignedDigraph bc(n), bd(n);
    bool has_conflict = false;
    for (const auto& [i, j] : arcs) {
      // layer assignment: 0 -> Bc only, 1 -> Bd only, 2 -> both
      const std::uint64_t layer = rng.below(3);
      double sign;
      switch (family) {
        case PairFamily::ConsistentBalanced:
          sign = static_cast<double>(gauge[i] * gauge[j]);
          break;
        default:
          sign = rng.coin() ? 1.0 : -1.0;
          break;
      }
      const double wc = sign * rng.uniform(0.5, 1.5);
      const double wd = sign * rng.uniform(0.5, 1.5);
      if (layer == 0 || layer == 2) bc.set_weight(i, j, wc);
      if (layer == 1 || layer == 2) bd.set_weight(i, j, wd);
      if (family == PairFamily::Inconsistent && layer == 2 && !has_conflict) {
        bd.set_weight(i, j, -wd);  // strictly opposite signs on a shared arc
        has_conflict = true;
      }
    }
    if (family == PairFamily::Inconsistent && !has_conflict) {
      // force a shared arc with opposite signs on the first skeleton arc
      const auto [i, j] = arcs.front();
      const double w = rng.uniform(0.5, 1.5);
      bc.set_weight(i, j, w);
      bd.set_weight(i, j, -w * rng.uniform(0.5, 1.5));
      has_conflict = true;
    }

    NetworkPair pair{bc, bd};
    if (!is_strongly_connected(union_support(pair))) continue;

    const bool consistent = sign_consistency(pair).consistent;
    if (family == PairFamily::Inconsistent) {
      if (!consistent) return pair;
      continue;
    }
    if (!consistent) continue;
    const BalanceResult bal = structural_balance(
        SignedDigraph::from_dense(bc.adjacency() + bd.adjacency()));
    if (family == PairFamily::ConsistentBalanced && bal.balanced) return pair;
    if (family == PairFamily::ConsistentUnbalanced && !bal.balanced) return pair;
  }
  throw std::runtime_error("random_pair: could not generate family instance");
}

}  // namespace signet
