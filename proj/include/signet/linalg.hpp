#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "signet/errors.hpp"
#include "signet/matrix.hpp"
#include "signet/tolerances.hpp"

namespace signet {

namespace detail {

// LU with partial pivoting, factored in place. Shared by the solvers and the
// determinant so pivot handling stays in one spot.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;  // row permutation
  int sign = 1;                   // permutation parity
  bool singular = false;          // a pivot fell below tol::pivot
};

inline LuFactors lu_factor(Matrix a) {
  if (!a.square()) throw std::invalid_argument("lu_factor: matrix not square");
  const std::size_t n = a.rows();
  LuFactors f;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < tol::pivot) {
      f.singular = true;
      f.lu = std::move(a);
      return f;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(f.perm[col], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a(r, col) / a(col, col);
      a(r, col) = m;
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= m * a(col, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

inline Vector lu_apply(const LuFactors& f, const Vector& b) {
  const std::size_t n = f.lu.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= f.lu(ii, j) * x[j];
    x[ii] /= f.lu(ii, ii);
  }
  return x;
}

}  // namespace detail

inline Vector lu_solve(const Matrix& a, const Vector& b) {
  if (!a.square() || a.rows() != b.size())
    throw std::invalid_argument("lu_solve: shape mismatch");
  auto f = detail::lu_factor(a);
  if (f.singular) throw SingularMatrix("lu_solve: pivot below tolerance");
  return detail::lu_apply(f, b);
}

// Column-by-column solve A X = B.
inline Matrix lu_solve(const Matrix& a, const Matrix& b) {
  if (!a.square() || a.rows() != b.rows())
    throw std::invalid_argument("lu_solve: shape mismatch");
  auto f = detail::lu_factor(a);
  if (f.singular) throw SingularMatrix("lu_solve: pivot below tolerance");
  Matrix x(b.rows(), b.cols());
  Vector col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    Vector xc = detail::lu_apply(f, col);
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = xc[i];
  }
  return x;
}

inline double determinant(const Matrix& a) {
  auto f = detail::lu_factor(a);
  if (f.singular) return 0.0;
  double det = f.sign;
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations, ascending.
// The input is symmetrized as (S+S^T)/2 after an eps_sym sanity check.
inline Vector symmetric_eigenvalues(const Matrix& s) {
  if (!s.square()) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
  const std::size_t n = s.rows();
  if (max_abs_diff(s, s.transpose()) > tol::sym)
    throw std::invalid_argument("symmetric_eigenvalues: input not symmetric");
  Matrix a = (s + s.transpose()) * 0.5;

  const double target = tol::jacobi * std::max(1.0, max_abs(a));
  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= target) {
      Vector ev(n);
      for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= target * 1e-2) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  throw ConvergenceFailure("symmetric_eigenvalues: no convergence in 100 sweeps");
}

inline bool is_positive_definite(const Matrix& s) {
  const Vector ev = symmetric_eigenvalues(s);
  return !ev.empty() && ev.front() > tol::pd;
}

// Solves A^T X + X A = I through the n^2 x n^2 Kronecker system
// (I (x) A^T + A^T (x) I) vec(X) = vec(I), then symmetrizes X.
inline Matrix lyapunov_solve(const Matrix& a) {
  if (!a.square()) throw std::invalid_argument("lyapunov_solve: matrix not square");
  const std::size_t n = a.rows();
  const std::size_t nn = n * n;
  // vec is column-stacking: entry X(i,j) sits at index j*n + i.
  Matrix k(nn, nn);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = j * n + i;
      // (A^T X)(i,j) = sum_m A(m,i) X(m,j); X(m,j) lives at j*n+m.
      for (std::size_t m = 0; m < n; ++m) k(row, j * n + m) += a(m, i);
      // (X A)(i,j) = sum_m X(i,m) A(m,j); X(i,m) lives at m*n+i.
      for (std::size_t m = 0; m < n; ++m) k(row, m * n + i) += a(m, j);
    }
  Vector rhs(nn, 0.0);
  for (std::size_t i = 0; i < n; ++i) rhs[i * n + i] = 1.0;

  auto f = detail::lu_factor(k);
  if (f.singular)
    throw SingularMatrix("lyapunov_solve: eigenvalue-sum degeneracy (matrix not positive stable)");
  const Vector xv = detail::lu_apply(f, rhs);

  Matrix x(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = xv[j * n + i];
  return (x + x.transpose()) * 0.5;
}

inline double lyapunov_residual(const Matrix& a, const Matrix& x) {
  return max_abs(a.transpose() * x + x * a - Matrix::identity(a.rows()));
}

// Left null vector of L normalized to sum 1: nu^T L = 0, nu^T 1 = 1.
// The last row of L^T is replaced by the normalization row (deterministic).
inline Vector left_null_unit(const Matrix& l) {
  if (!l.square()) throw std::invalid_argument("left_null_unit: matrix not square");
  const std::size_t n = l.rows();
  Matrix sys = l.transpose();
  for (std::size_t j = 0; j < n; ++j) sys(n - 1, j) = 1.0;
  Vector rhs(n, 0.0);
  rhs[n - 1] = 1.0;
  Vector nu = lu_solve(sys, rhs);

  const double sum = std::accumulate(nu.begin(), nu.end(), 0.0);
  if (std::abs(sum) < tol::pivot)
    throw SingularMatrix("left_null_unit: null vector has zero component sum");
  for (double& v : nu) v /= sum;

  Vector res(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) res[j] += nu[i] * l(i, j);
  if (max_abs(res) > tol::null_vec)
    throw SingularMatrix("left_null_unit: left null space is not one-dimensional");
  return nu;
}

// Lyapunov criterion as a positive-stability oracle: A is positive stable
// iff A^T X + X A = I admits a positive definite solution.
inline bool positive_stable_lyapunov_test(const Matrix& a) {
  try {
    return is_positive_definite(lyapunov_solve(a));
  } catch (const SingularMatrix&) {
    return false;
  }
}

}  // namespace signet
