#pragma once

// Fixed numeric tolerances. Sizes here are tiny (n <= ~30, Lyapunov systems
// up to ~900 unknowns), so double precision leaves large headroom.

namespace signet::tol {

inline constexpr double cancel = 1e-12;  // relative, union arc cancellation
inline constexpr double mat = 1e-9;      // absolute, entrywise matrix equality
inline constexpr double pivot = 1e-12;   // LU pivot magnitude floor
inline constexpr double solve = 1e-9;    // lu_solve residual bound
inline constexpr double sym = 1e-9;      // symmetry check before Jacobi
inline constexpr double jacobi = 1e-12;  // off-diagonal target, scaled by max|entry|
inline constexpr double pd = 1e-10;      // lambda_min threshold for definiteness
inline constexpr double lyap = 1e-8;     // Lyapunov equation residual bound
inline constexpr double null_vec = 1e-8; // left null vector residual bound

}  // namespace signet::tol
