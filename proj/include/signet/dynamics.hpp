#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "signet/balance.hpp"
#include "signet/errors.hpp"
#include "signet/linalg.hpp"
#include "signet/matrix.hpp"
#include "signet/sgraph.hpp"
#include "signet/stability.hpp"

namespace signet {

struct State {
  Vector x;
  Vector y;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double k = 0.0;
  double h = 0.0;
  bool stopped_early = false;

  const State& back() const { return states.back(); }
};

enum class OutcomeKind { Polarization, Neutralization, Inconclusive };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Inconclusive;
  double theta = 0.0;             // common magnitude for Polarization
  std::vector<int> signs;         // per-agent sign (+1/-1/0) for Polarization
  std::string reason;             // which criterion failed, for Inconclusive
};

struct Prediction {
  OutcomeKind kind = OutcomeKind::Inconclusive;
  std::optional<GaugeVector> gauge;  // polarization basis
  std::optional<Vector> nu;          // left null vector of D L_B D
};

struct SimParams {
  double h = 1e-3;
  double t_max = 200.0;
  double tol_stop = 1e-9;
  std::size_t sample_stride = 100;
  double overflow_guard = 1e12;
};

// Block form of the coupled first/second-channel dynamics:
// [xdot; ydot] = [[-L_Bc, I], [-k L_Bd, -k I]] [x; y].
inline Matrix system_matrix(const NetworkPair& pair, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("system_matrix: k must be positive");
  const std::size_t n = pair.size();
  Matrix a(2 * n, 2 * n);
  place_block(a, 0, 0, laplacian(pair.bc) * -1.0);
  place_block(a, 0, n, Matrix::identity(n));
  place_block(a, n, 0, laplacian(pair.bd) * -k);
  place_block(a, n, n, Matrix::identity(n) * -k);
  return a;
}

// Transformed form: Gamma = [[0, -k (L_Bc + L_Bd)], [I, -(k I + L_Bc)]],
// similar to the system matrix through Theta = [[kI, I], [I, 0]].
inline Matrix gamma_matrix(const NetworkPair& pair, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("gamma_matrix: k must be positive");
  const std::size_t n = pair.size();
  Matrix g(2 * n, 2 * n);
  place_block(g, 0, n, (laplacian(pair.bc) + laplacian(pair.bd)) * -k);
  place_block(g, n, 0, Matrix::identity(n));
  Matrix lower = laplacian(pair.bc) * -1.0;
  for (std::size_t i = 0; i < n; ++i) lower(i, i) -= k;
  place_block(g, n, n, lower);
  return g;
}

inline Matrix theta_matrix(std::size_t n, double k) {
  Matrix t(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = k;
    t(i, n + i) = 1.0;
    t(n + i, i) = 1.0;
  }
  return t;
}

// Y = Theta X = (k x + y, x).
inline Vector theta_transform(const State& s, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("theta_transform: k must be positive");
  const std::size_t n = s.x.size();
  Vector y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = k * s.x[i] + s.y[i];
    y[n + i] = s.x[i];
  }
  return y;
}

// X = Theta^-1 Y with Theta^-1 = [[0, I], [I, -kI]].
inline State theta_inverse(const Vector& y, double k) {
  const std::size_t n = y.size() / 2;
  State s{Vector(n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = y[n + i];
    s.y[i] = y[i] - k * y[n + i];
  }
  return s;
}

// Classical fixed-step RK4 on Xdot = A X. Samples every sample_stride steps;
// stops early once ||Xdot||_inf stays at or below tol_stop for 10 consecutive
// samples (guards against pausing at slow saddle passages).
inline Trajectory simulate(const NetworkPair& pair, double k, const Vector& x0,
                           const Vector& y0, const SimParams& p = {}) {
  const std::size_t n = pair.size();
  if (x0.size() != n || y0.size() != n)
    throw std::invalid_argument("simulate: initial state dimension mismatch");
  if (!(p.h > 0.0) || !(p.t_max > 0.0))
    throw std::invalid_argument("simulate: h and t_max must be positive");
  const Matrix a = system_matrix(pair, k);
  const std::size_t dim = 2 * n;

  Vector state(dim);
  for (std::size_t i = 0; i < n; ++i) {
    state[i] = x0[i];
    state[n + i] = y0[i];
  }

  Trajectory traj;
  traj.k = k;
  traj.h = p.h;

  auto deriv = [&](const Vector& v, Vector& out) {
    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += a(i, j) * v[j];
      out[i] = s;
    }
  };
  auto record = [&](double t) {
    State s{Vector(n), Vector(n)};
    for (std::size_t i = 0; i < n; ++i) {
      s.x[i] = state[i];
      s.y[i] = state[n + i];
    }
    traj.times.push_back(t);
    traj.states.push_back(std::move(s));
  };

  Vector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const std::size_t total_steps = static_cast<std::size_t>(std::llround(p.t_max / p.h));
  std::size_t quiet_samples = 0;
  record(0.0);
  deriv(state, k1);
  if (max_abs(k1) <= p.tol_stop) quiet_samples = 1;

  for (std::size_t step = 1; step <= total_steps; ++step) {
    deriv(state, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * p.h * k1[i];
    deriv(tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * p.h * k2[i];
    deriv(tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + p.h * k3[i];
    deriv(tmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      state[i] += p.h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    for (double v : state)
      if (!std::isfinite(v) || std::abs(v) > p.overflow_guard)
        throw DivergenceDetected("simulate: state exceeded overflow guard");

    const bool at_sample = (step % p.sample_stride == 0) || step == total_steps;
    if (!at_sample) continue;
    record(static_cast<double>(step) * p.h);
    deriv(state, k1);
    if (max_abs(k1) <= p.tol_stop) {
      if (++quiet_samples >= 10) {
        traj.stopped_early = step != total_steps;
        break;
      }
    } else {
      quiet_samples = 0;
    }
  }
  return traj;
}

// Neutralization when everything is small; polarization when the auxiliary
// states died out and |x_i| share a common magnitude. Neutralization takes
// precedence at theta = 0, where the two definitions coincide.
inline Outcome classify_outcome(const Trajectory& traj, double tol_conv) {
  const State& end = traj.back();
  const double xmax = max_abs(end.x);
  const double ymax = max_abs(end.y);

  Outcome out;
  if (std::max(xmax, ymax) <= tol_conv) {
    out.kind = OutcomeKind::Neutralization;
    return out;
  }
  if (ymax > tol_conv) {
    out.kind = OutcomeKind::Inconclusive;
    out.reason = "auxiliary states have not settled";
    return out;
  }
  const std::size_t n = end.x.size();
  double mean = 0.0;
  for (double v : end.x) mean += std::abs(v);
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : end.x) var += (std::abs(v) - mean) * (std::abs(v) - mean);
  const double stdev = std::sqrt(var / static_cast<double>(n));
  if (stdev > tol_conv) {
    out.kind = OutcomeKind::Inconclusive;
    out.reason = "state magnitudes do not share a common level";
    return out;
  }
  out.kind = OutcomeKind::Polarization;
  out.theta = mean;
  out.signs.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.signs[i] = std::abs(end.x[i]) <= tol_conv ? 0 : (end.x[i] > 0.0 ? 1 : -1);
  return out;
}

// Closed-form polarization limit {nu^T D [x(0) + k^-1 y(0)]} D 1, with nu the
// unit-sum left null vector of D L_B D for B = Bc + Bd.
inline Vector predicted_limit(const NetworkPair& pair, double k, const Vector& x0,
                              const Vector& y0, const GaugeVector& d) {
  if (!(k > 0.0)) throw std::invalid_argument("predicted_limit: k must be positive");
  const Matrix dm = gauge_matrix(d);
  const Matrix lb =
      laplacian(SignedDigraph::from_dense(pair.bc.adjacency() + pair.bd.adjacency()));
  const Vector nu = left_null_unit(dm * lb * dm);
  double scale = 0.0;
  for (std::size_t i = 0; i < pair.size(); ++i)
    scale += nu[i] * d[i] * (x0[i] + y0[i] / k);
  Vector limit(pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i) limit[i] = scale * d[i];
  return limit;
}

// Theory dispatch: sign-consistent pairs polarize iff the union is
// structurally balanced (gain from mu); sign-inconsistent pairs always
// neutralize (gain from zeta). Requires a strongly connected union.
inline std::pair<Prediction, GainAnalysis> predict(const NetworkPair& pair, double delta,
                                                   double margin) {
  if (!is_strongly_connected(union_support(pair)))
    throw NotStronglyConnected("predict: the union digraph is not strongly connected");

  Prediction pred;
  GainAnalysis analysis;
  if (sign_consistency(pair).consistent) {
    analysis = compute_mu(pair, delta);
    const SignedDigraph union_graph =
        SignedDigraph::from_dense(pair.bc.adjacency() + pair.bd.adjacency());
    const BalanceResult bal = structural_balance(union_graph);
    if (bal.balanced) {
      pred.kind = OutcomeKind::Polarization;
      pred.gauge = bal.gauge;
      const Matrix dm = gauge_matrix(bal.gauge);
      pred.nu = left_null_unit(dm * laplacian(union_graph) * dm);
    } else {
      pred.kind = OutcomeKind::Neutralization;
    }
  } else {
    analysis = compute_zeta(pair, delta);
    pred.kind = OutcomeKind::Neutralization;
  }
  select_gain(analysis, margin);
  return {pred, analysis};
}

struct ReconcileReport {
  Prediction prediction;
  GainAnalysis gain;
  Outcome outcome;
  double certificate_residual = 0.0;
  double deviation = 0.0;  // ||x(T) - limit_x||_inf against the theory limit
  double end_y = 0.0;
  bool kinds_match = false;
  bool pass = false;
};

// Full pipeline: predict, simulate at the selected k, classify, compare.
inline ReconcileReport reconcile(const NetworkPair& pair, double delta, double margin,
                                 const Vector& x0, const Vector& y0,
                                 const SimParams& params = {}, double tol_conv = 1e-3) {
  ReconcileReport rep;
  auto [pred, gain] = predict(pair, delta, margin);
  rep.prediction = pred;
  rep.gain = gain;
  rep.certificate_residual = pred.kind == OutcomeKind::Polarization
                                 ? certificate_balanced(pair, *pred.gauge).residual
                                 : certificate_unbalanced(pair).residual;

  const Trajectory traj = simulate(pair, gain.k, x0, y0, params);
  rep.outcome = classify_outcome(traj, tol_conv);
  rep.end_y = max_abs(traj.back().y);

  if (pred.kind == OutcomeKind::Polarization) {
    const Vector limit = predicted_limit(pair, gain.k, x0, y0, *pred.gauge);
    double dev = 0.0;
    for (std::size_t i = 0; i < pair.size(); ++i)
      dev = std::max(dev, std::abs(traj.back().x[i] - limit[i]));
    rep.deviation = dev;
    // theta near zero classifies as neutralization; the definitions coincide
    rep.kinds_match = rep.outcome.kind == OutcomeKind::Polarization ||
                      (rep.outcome.kind == OutcomeKind::Neutralization &&
                       max_abs(limit) <= tol_conv);
  } else {
    rep.deviation = max_abs(traj.back().x);
    rep.kinds_match = rep.outcome.kind == pred.kind;
  }
  rep.pass = rep.kinds_match && rep.deviation <= tol_conv && rep.end_y <= tol_conv;
  return rep;
}

}  // namespace signet
