#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "signet/generators.hpp"
#include "signet/sgraph.hpp"

using namespace signet;

namespace {

SignedDigraph dense(std::initializer_list<std::initializer_list<double>> rows) {
  return SignedDigraph::from_dense(Matrix(rows));
}

}  // namespace

TEST_CASE("SignedDigraph invariants") {
  SignedDigraph g(3);
  CHECK_THROWS_AS(g.set_weight(1, 1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(g.set_weight(0, 1, std::nan("")), std::invalid_argument);
  g.set_weight(0, 1, 2.0);
  g.set_weight(0, 1, 0.0);  // zero erases
  CHECK(g.weights().empty());
  CHECK_THROWS_AS(SignedDigraph(0), std::invalid_argument);
  CHECK_THROWS_AS(NetworkPair(SignedDigraph(2), SignedDigraph(3)), std::invalid_argument);
}

TEST_CASE("laplacian") {
  SECTION("2x2 signed") {
    const Matrix l = laplacian(dense({{0, -2}, {1, 0}}));
    CHECK(max_abs_diff(l, Matrix{{2, 2}, {-1, 1}}) == 0.0);
  }
  SECTION("empty graph") {
    CHECK(max_abs(laplacian(SignedDigraph(3))) == 0.0);
  }
  SECTION("3x3 mixed signs") {
    const Matrix l = laplacian(dense({{0, 1, -1}, {1, 0, 0}, {0, -2, 0}}));
    CHECK(max_abs_diff(l, Matrix{{2, -1, 1}, {-1, 1, 0}, {0, 2, 2}}) == 0.0);
  }
  SECTION("row sums equal sum of |b|-b, nonnegative") {
    SplitMix64 rng(40);
    for (int t = 0; t < 20; ++t) {
      const SignedDigraph g = oracle::random_digraph(5, rng);
      const Matrix l = laplacian(g);
      const Matrix b = g.adjacency();
      for (std::size_t i = 0; i < 5; ++i) {
        double row = 0.0, expect = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
          row += l(i, j);
          expect += std::abs(b(i, j)) - b(i, j);
        }
        CHECK(row == Catch::Approx(expect).margin(1e-12));
        CHECK(row >= -1e-12);
      }
    }
  }
}

TEST_CASE("degree_matrix") {
  CHECK(max_abs_diff(degree_matrix(Matrix{{1, 2}, {3, 4}}), Matrix{{3, 0}, {0, 7}}) == 0.0);
  CHECK(max_abs(degree_matrix(Matrix(2, 2, 0.0))) == 0.0);
  CHECK(max_abs_diff(degree_matrix(Matrix{{-1, 0}, {0, -5}}), Matrix{{-1, 0}, {0, -5}}) ==
        0.0);
}

TEST_CASE("pos_neg_split") {
  const auto [plus, minus] = pos_neg_split(dense({{0, 3}, {-2, 0}}));
  CHECK(max_abs_diff(plus, Matrix{{0, 3}, {0, 0}}) == 0.0);
  CHECK(max_abs_diff(minus, Matrix{{0, 0}, {-2, 0}}) == 0.0);

  SECTION("one-sided graphs split trivially") {
    const auto g_pos = dense({{0, 2}, {1, 0}});
    const auto [pp, pm] = pos_neg_split(g_pos);
    CHECK(max_abs_diff(pp, g_pos.adjacency()) == 0.0);
    CHECK(max_abs(pm) == 0.0);
    const auto g_neg = dense({{0, -2}, {-1, 0}});
    const auto [np, nm] = pos_neg_split(g_neg);
    CHECK(max_abs(np) == 0.0);
    CHECK(max_abs_diff(nm, g_neg.adjacency()) == 0.0);
  }

  SECTION("recomposition is exact and parts have uniform sign") {
    SplitMix64 rng(41);
    for (int t = 0; t < 20; ++t) {
      const SignedDigraph g = oracle::random_digraph(6, rng);
      const auto [p, m] = pos_neg_split(g);
      CHECK(max_abs_diff(p + m, g.adjacency()) == 0.0);
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
          CHECK(p(i, j) >= 0.0);
          CHECK(m(i, j) <= 0.0);
        }
    }
  }
}

TEST_CASE("sign_consistency") {
  SECTION("opposite signs flagged with smallest witness") {
    SignedDigraph bc(3), bd(3);
    bc.set_weight(0, 1, 1.0);
    bd.set_weight(0, 1, -1.0);
    bc.set_weight(2, 1, -1.0);
    bd.set_weight(2, 1, 1.0);
    const auto r = sign_consistency(NetworkPair{bc, bd});
    REQUIRE_FALSE(r.consistent);
    CHECK(*r.witness == ArcKey{0, 1});
  }
  SECTION("zero products are consistent") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(0, 1, 1.0);
    CHECK(sign_consistency(NetworkPair{bc, bd}).consistent);
  }
  SECTION("identical digraphs are consistent") {
    SplitMix64 rng(42);
    const SignedDigraph g = oracle::random_digraph(4, rng);
    CHECK(sign_consistency(NetworkPair{g, g}).consistent);
  }
  SECTION("verdict symmetric under swapping the pair") {
    SplitMix64 rng(43);
    for (int t = 0; t < 20; ++t) {
      const SignedDigraph a = oracle::random_digraph(4, rng);
      const SignedDigraph b = oracle::random_digraph(4, rng);
      CHECK(sign_consistency(NetworkPair{a, b}).consistent ==
            sign_consistency(NetworkPair{b, a}).consistent);
    }
  }
}

TEST_CASE("union_support") {
  SignedDigraph bc(2), bd(2);
  bc.set_weight(1, 0, 1.0);  // arc 1 -> 2 in 1-indexed terms
  bd.set_weight(0, 1, 1.0);
  const auto s = union_support(NetworkPair{bc, bd});
  CHECK(s.arcs == std::set<ArcKey>{{1, 0}, {0, 1}});
  CHECK(union_support(NetworkPair{bc, bc}).arcs == support_of(bc).arcs);
  CHECK(union_support(NetworkPair{SignedDigraph(2), SignedDigraph(2)}).arcs.empty());
}

TEST_CASE("union_adjacency") {
  SECTION("consistent pair adds entrywise") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(0, 1, 1.0);
    bd.set_weight(0, 1, 2.0);
    const auto u = union_adjacency(NetworkPair{bc, bd}, 1.0, 1.0);
    CHECK(u.weight(0, 1) == 3.0);
  }
  SECTION("exact cancellation rejected") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(0, 1, 1.0);
    bd.set_weight(0, 1, -1.0);
    const NetworkPair pair{bc, bd};
    CHECK_THROWS_AS(union_adjacency(pair, 1.0, 1.0), CancellationError);
    CHECK(union_adjacency(pair, 1.0, 2.0).weight(0, 1) == -1.0);
  }
  SECTION("support matches union_support whenever accepted") {
    SplitMix64 rng(44);
    for (int t = 0; t < 30; ++t) {
      const SignedDigraph a = oracle::random_digraph(5, rng);
      const SignedDigraph b = oracle::random_digraph(5, rng);
      const NetworkPair pair{a, b};
      for (double alpha : {0.5, 1.0}) {
        for (double beta : {1.0, 2.0}) {
          try {
            const auto u = union_adjacency(pair, alpha, beta);
            CHECK(support_of(u).arcs == union_support(pair).arcs);
          } catch (const CancellationError&) {
            // rejected coefficients make no support claim
          }
        }
      }
    }
  }
}

TEST_CASE("safe_union_coefficients") {
  SECTION("consistent pair gets (1,1)") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(0, 1, 1.0);
    bd.set_weight(0, 1, 2.0);
    CHECK(safe_union_coefficients(NetworkPair{bc, bd}) == std::pair{1.0, 1.0});
  }
  SECTION("beta=1 forbidden by exact cancellation") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(0, 1, 2.0);
    bd.set_weight(0, 1, -2.0);
    CHECK(safe_union_coefficients(NetworkPair{bc, bd}) == std::pair{1.0, 2.0});
  }
  SECTION("scans past multiple forbidden ratios") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(0, 1, -3.0);
    bc.set_weight(1, 0, 1.0);
    bd.set_weight(0, 1, 1.0);
    bd.set_weight(1, 0, -1.0);
    // forbidden ratios are beta = 3 (entry (1,2)) and beta = 1 (entry (2,1))
    const auto [alpha, beta] = safe_union_coefficients(NetworkPair{bc, bd});
    CHECK(alpha == 1.0);
    CHECK(beta == 2.0);
    CHECK_NOTHROW(union_adjacency(NetworkPair{bc, bd}, alpha, beta));
  }
}

TEST_CASE("is_strongly_connected") {
  SECTION("directed 3-cycle") {
    DigraphSupport s;
    s.n = 3;
    s.arcs = {{1, 0}, {2, 1}, {0, 2}};
    CHECK(is_strongly_connected(s));
  }
  SECTION("one-way pair") {
    DigraphSupport s;
    s.n = 2;
    s.arcs = {{1, 0}};
    CHECK_FALSE(is_strongly_connected(s));
  }
  SECTION("single vertex") {
    DigraphSupport s;
    s.n = 1;
    CHECK(is_strongly_connected(s));
  }
  SECTION("agrees with per-vertex BFS oracle on small random graphs") {
    SplitMix64 rng(45);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 2 + rng.below(5);  // n in 2..6
      const SignedDigraph g = oracle::random_digraph(n, rng, 0.3);
      const DigraphSupport s = support_of(g);
      CHECK(is_strongly_connected(s) == oracle::bfs_strongly_connected(s));
    }
  }
}

TEST_CASE("agent_order_sets") {
  SECTION("all single-integrator when Bd is empty") {
    SplitMix64 rng(46);
    const SignedDigraph bc = oracle::random_digraph(4, rng);
    const auto [i1, i2] = agent_order_sets(NetworkPair{bc, SignedDigraph(4)});
    CHECK(i1 == std::vector<std::size_t>{0, 1, 2, 3});
  }
  SECTION("all double-integrator when Bc is empty") {
    SplitMix64 rng(47);
    const SignedDigraph bd = oracle::random_digraph(4, rng);
    const auto [i1, i2] = agent_order_sets(NetworkPair{SignedDigraph(4), bd});
    CHECK(i2 == std::vector<std::size_t>{0, 1, 2, 3});
  }
  SECTION("row scan") {
    SignedDigraph bc(2), bd(2);
    bc.set_weight(1, 0, 1.0);  // row 1 of Bc zero
    bd.set_weight(0, 1, 1.0);  // row 2 of Bd zero
    const auto [i1, i2] = agent_order_sets(NetworkPair{bc, bd});
    CHECK(i1 == std::vector<std::size_t>{1});
    CHECK(i2 == std::vector<std::size_t>{0});
  }
}

TEST_CASE("generated families satisfy their hypotheses") {
  SplitMix64 rng(48);
  for (auto family : {PairFamily::ConsistentBalanced, PairFamily::ConsistentUnbalanced,
                      PairFamily::Inconsistent}) {
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 3 + rng.below(4);
      const NetworkPair pair = random_pair(family, n, rng);
      CHECK(is_strongly_connected(union_support(pair)));
      const bool consistent = sign_consistency(pair).consistent;
      if (family == PairFamily::Inconsistent) {
        CHECK_FALSE(consistent);
      } else {
        CHECK(consistent);
        const auto bal = structural_balance(
            SignedDigraph::from_dense(pair.bc.adjacency() + pair.bd.adjacency()));
        CHECK(bal.balanced == (family == PairFamily::ConsistentBalanced));
      }
    }
  }
}
