#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "signet/balance.hpp"
#include "signet/errors.hpp"
#include "signet/linalg.hpp"
#include "signet/matrix.hpp"
#include "signet/sgraph.hpp"
#include "signet/tolerances.hpp"

namespace signet {

inline constexpr double kDefaultDelta = 2.0;
inline constexpr double kDefaultMargin = 0.1;

// E = [-1 | I], F = [0 ; I], C = [1 0 ... 0], Q = [1 F] with Q^-1 = [C ; E].
struct SelectorMatrices {
  Matrix e;     // (n-1) x n
  Matrix f;     // n x (n-1)
  Matrix c;     // 1 x n
  Matrix q;     // n x n
  Matrix qinv;  // n x n
};

inline SelectorMatrices selector_matrices(std::size_t n) {
  if (n < 2) throw std::invalid_argument("selector_matrices: need n >= 2");
  SelectorMatrices s{Matrix(n - 1, n), Matrix(n, n - 1), Matrix(1, n), Matrix(n, n),
                     Matrix(n, n)};
  for (std::size_t i = 0; i < n - 1; ++i) {
    s.e(i, 0) = -1.0;
    s.e(i, i + 1) = 1.0;
    s.f(i + 1, i) = 1.0;
  }
  s.c(0, 0) = 1.0;
  for (std::size_t i = 0; i < n; ++i) s.q(i, 0) = 1.0;
  place_block(s.q, 0, 1, s.f);
  place_block(s.qinv, 0, 0, s.c);
  place_block(s.qinv, 1, 0, s.e);
  if (max_abs_diff(s.q * s.qinv, Matrix::identity(n)) > tol::mat)
    throw std::logic_error("selector_matrices: Q inverse identity failed");
  return s;
}

enum class CertificateKind { BalancedW, UnbalancedH, InconsistentH };

// Positive definite Lyapunov solution with its verification residual.
struct StabilityCertificate {
  CertificateKind kind;
  Matrix matrix;  // W ((n-1) x (n-1)) or H (n x n)
  double residual = 0.0;
  std::optional<GaugeVector> gauge;  // present for BalancedW
};

namespace detail {

inline Matrix laplacian_sum(const NetworkPair& pair, double wc = 1.0, double wd = 1.0) {
  return laplacian(pair.bc) * wc + laplacian(pair.bd) * wd;
}

inline StabilityCertificate make_certificate(CertificateKind kind, const Matrix& a,
                                             std::optional<GaugeVector> gauge) {
  StabilityCertificate cert{kind, lyapunov_solve(a), 0.0, std::move(gauge)};
  cert.residual = lyapunov_residual(a, cert.matrix);
  if (!is_positive_definite(cert.matrix))
    throw NotPositiveDefinite("certificate: Lyapunov solution is not positive definite");
  return cert;
}

}  // namespace detail

// W solving [E D (L_Bc + L_Bd) D F]^T W + W [E D (L_Bc + L_Bd) D F] = I,
// for a sign-consistent pair whose union is strongly connected and
// structurally balanced with gauge D.
inline StabilityCertificate certificate_balanced(const NetworkPair& pair,
                                                 const GaugeVector& d) {
  const auto sel = selector_matrices(pair.size());
  const Matrix dm = gauge_matrix(d);
  const Matrix reduced = sel.e * dm * detail::laplacian_sum(pair) * dm * sel.f;
  return detail::make_certificate(CertificateKind::BalancedW, reduced, d);
}

// H solving (L_Bc + L_Bd)^T H + H (L_Bc + L_Bd) = I. Valid both for
// sign-consistent pairs with structurally unbalanced union and for
// sign-inconsistent pairs (where the sum is positive stable by the
// M-matrix argument).
inline StabilityCertificate certificate_unbalanced(const NetworkPair& pair) {
  const auto kind = sign_consistency(pair).consistent ? CertificateKind::UnbalancedH
                                                      : CertificateKind::InconsistentH;
  return detail::make_certificate(kind, detail::laplacian_sum(pair), std::nullopt);
}

// Gain analysis around the index (mu for sign-consistent pairs, zeta for
// sign-inconsistent ones). k stays unset until select_gain.
struct GainAnalysis {
  double delta = 0.0;
  double index = 0.0;
  double k = 0.0;
  double margin = 0.0;
  bool balanced_branch = false;  // Phi/Psi taken in reduced (gauged) form
};

inline double select_gain(GainAnalysis& analysis, double margin) {
  if (!(margin > 0.0))
    throw std::invalid_argument("select_gain: margin must be positive (strict k > index)");
  analysis.margin = margin;
  analysis.k = analysis.index * (1.0 + margin);
  return analysis.k;
}

namespace detail {

inline double index_from(const Matrix& phi, const Matrix& psi, double delta) {
  const Vector phi_ev = symmetric_eigenvalues(phi);
  const Vector gram_ev = symmetric_eigenvalues(psi * psi.transpose());
  return phi_ev.back() * gram_ev.back() / (2.0 * (delta - 1.0));
}

}  // namespace detail

// mu = lambda_max(Phi) * lambda_max(Psi Psi^T) / (2 (delta - 1)), with the
// Phi/Psi branch decided by structural balance of the canonical union
// B = Bc + Bd.
inline GainAnalysis compute_mu(const NetworkPair& pair, double delta) {
  if (!(delta > 1.0)) throw DeltaOutOfRange("compute_mu: delta must exceed 1");
  if (!sign_consistency(pair).consistent)
    throw std::invalid_argument("compute_mu: pair must be sign-consistent");

  const SignedDigraph union_graph =
      SignedDigraph::from_dense(pair.bc.adjacency() + pair.bd.adjacency());
  const BalanceResult bal = structural_balance(union_graph);

  GainAnalysis analysis;
  analysis.delta = delta;
  analysis.balanced_branch = bal.balanced;
  if (bal.balanced) {
    const auto sel = selector_matrices(pair.size());
    const Matrix dm = gauge_matrix(bal.gauge);
    const Matrix phi = certificate_balanced(pair, bal.gauge).matrix;
    const Matrix psi = sel.e * dm * detail::laplacian_sum(pair, 1.0, delta) * dm * sel.f;
    analysis.index = detail::index_from(phi, psi, delta);
  } else {
    const Matrix phi = certificate_unbalanced(pair).matrix;
    const Matrix psi = detail::laplacian_sum(pair, 1.0, delta);
    analysis.index = detail::index_from(phi, psi, delta);
  }
  return analysis;
}

// zeta = lambda_max(H) * lambda_max((L_Bc + delta L_Bd)(...)^T) / (2 (delta - 1)).
inline GainAnalysis compute_zeta(const NetworkPair& pair, double delta) {
  if (!(delta > 1.0)) throw DeltaOutOfRange("compute_zeta: delta must exceed 1");
  if (sign_consistency(pair).consistent)
    throw std::invalid_argument("compute_zeta: pair must be sign-inconsistent");

  GainAnalysis analysis;
  analysis.delta = delta;
  analysis.balanced_branch = false;
  const Matrix h = certificate_unbalanced(pair).matrix;
  const Matrix psi = detail::laplacian_sum(pair, 1.0, delta);
  analysis.index = detail::index_from(h, psi, delta);
  return analysis;
}

// Nonnegative augmented adjacency over {v_0} + V: the added root v_0 feeds
// every agent holding a negative in-arc, the agents keep the positive parts.
inline Matrix augmented_digraph(const NetworkPair& pair) {
  if (sign_consistency(pair).consistent)
    throw std::invalid_argument("augmented_digraph: pair must be sign-inconsistent");
  const std::size_t n = pair.size();
  const auto [cp, cm] = pos_neg_split(pair.bc);
  const auto [dp, dm] = pos_neg_split(pair.bd);
  const Matrix plus = cp + dp;
  const Matrix minus = cm + dm;

  Matrix abar(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double row_abs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row_abs += std::abs(minus(i, j));
      abar(i + 1, j + 1) = plus(i, j);
    }
    abar(i + 1, 0) = row_abs;
  }
  return abar;
}

// BFS from the root over arcs (v_j -> v_i) <=> abar(i, j) > 0.
inline bool root_reaches_all(const Matrix& abar) {
  const std::size_t m = abar.rows();
  std::vector<bool> seen(m, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.back();
    queue.pop_back();
    for (std::size_t v = 0; v < m; ++v) {
      if (!seen[v] && abar(v, u) > 0.0) {
        seen[v] = true;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == m;
}

// L_{Bc+ + Bd+} + Delta_{|Bc- + Bd-|}; off-diagonals are nonpositive by
// construction (Z-pattern).
inline Matrix m_matrix_core(const NetworkPair& pair) {
  const auto [cp, cm] = pos_neg_split(pair.bc);
  const auto [dp, dm] = pos_neg_split(pair.bd);
  const Matrix lp = laplacian(SignedDigraph::from_dense(cp + dp));
  Matrix neg_abs = cm + dm;
  for (std::size_t i = 0; i < neg_abs.rows(); ++i)
    for (std::size_t j = 0; j < neg_abs.cols(); ++j) neg_abs(i, j) = std::abs(neg_abs(i, j));
  return lp + degree_matrix(neg_abs);
}

// Nonsingular M-matrix test: Z-pattern plus positive leading principal minors.
inline bool is_m_matrix(const Matrix& z) {
  if (!z.square()) throw std::invalid_argument("is_m_matrix: matrix not square");
  const std::size_t n = z.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && z(i, j) > tol::mat) return false;
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = z(i, j);
    if (!(determinant(lead) > 0.0)) return false;
  }
  return true;
}

// Xi = I - core^-1 (Bc- + Bd-); nonnegative when the core is an M-matrix,
// and core * Xi recomposes L_Bc + L_Bd.
inline Matrix xi_matrix(const NetworkPair& pair) {
  const auto [cp, cm] = pos_neg_split(pair.bc);
  const auto [dp, dm] = pos_neg_split(pair.bd);
  const Matrix neg = cm + dm;
  if (max_abs(neg) == 0.0) return Matrix::identity(pair.size());
  const Matrix core = m_matrix_core(pair);
  const Matrix solved = lu_solve(core, neg);  // throws SingularMatrix if core singular
  return Matrix::identity(pair.size()) - solved;
}

struct Lemma6Report {
  bool core_is_m = false;
  bool tree = false;
};

// Both checks must pass when the union of a sign-inconsistent pair is
// strongly connected; no claim otherwise.
inline Lemma6Report verify_lemma6(const NetworkPair& pair) {
  if (sign_consistency(pair).consistent)
    throw std::invalid_argument("verify_lemma6: pair must be sign-inconsistent");
  Lemma6Report report;
  report.core_is_m = is_m_matrix(m_matrix_core(pair));
  report.tree = root_reaches_all(augmented_digraph(pair));
  return report;
}

}  // namespace signet
