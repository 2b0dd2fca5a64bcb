// signet: analyze and simulate directed signed networks with two coupling
// topologies. Subcommands: analyze, gain, simulate, verify.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "signet/signet.hpp"

namespace {

using nlohmann::ordered_json;
using namespace signet;

enum ExitCode { kOk = 0, kInputError = 1, kHypothesisFailure = 2, kDivergence = 3 };

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("SIGNET_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string arc_label(const ArcKey& arc) {
  return "(" + std::to_string(arc.first + 1) + "," + std::to_string(arc.second + 1) + ")";
}

std::string gauge_label(const GaugeVector& d) {
  std::string out = "[";
  for (std::size_t i = 0; i < d.size(); ++i)
    out += (d[i] > 0 ? std::string("+1") : std::string("-1")) + (i + 1 < d.size() ? ", " : "");
  return out + "]";
}

ordered_json gauge_json(const GaugeVector& d) {
  ordered_json a = ordered_json::array();
  for (int v : d) a.push_back(v);
  return a;
}

std::string outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Polarization: return "polarization";
    case OutcomeKind::Neutralization: return "neutralization";
    default: return "inconclusive";
  }
}

struct ResolvedInputs {
  NetworkPair pair;
  Vector x0;
  Vector y0;
  double delta;
  double margin;
  std::optional<double> k;
};

ResolvedInputs resolve_inputs(const NetworkFile& f) {
  ResolvedInputs r{to_pair(f), {}, {}, f.delta.value_or(kDefaultDelta),
                   f.margin.value_or(kDefaultMargin), f.k};
  SplitMix64 rng(f.seed.value_or(0));
  r.x0 = f.x0 ? *f.x0 : random_vector(f.n, rng);
  r.y0 = f.y0 ? *f.y0 : random_vector(f.n, rng);
  return r;
}

// ---------------------------------------------------------------- analyze --

int cmd_analyze(const std::string& path, bool json_out) {
  const NetworkFile file = parse_network_file(path);
  const ResolvedInputs in = resolve_inputs(file);
  const auto& pair = in.pair;
  log_info("parsed network with n=" + std::to_string(file.n));

  const ConsistencyResult consistency = sign_consistency(pair);
  const bool connected = is_strongly_connected(union_support(pair));

  ordered_json j;
  j["n"] = file.n;
  j["sign_consistency"]["consistent"] = consistency.consistent;
  if (consistency.witness)
    j["sign_consistency"]["witness"] = {consistency.witness->first + 1,
                                        consistency.witness->second + 1};
  j["union"]["strongly_connected"] = connected;

  std::ostringstream text;
  text << "network: n=" << file.n << "\n";
  text << "sign consistency: " << (consistency.consistent ? "consistent" : "inconsistent");
  if (consistency.witness) text << ", witness " << arc_label(*consistency.witness);
  text << "\n";
  text << "union: " << (connected ? "strongly connected" : "NOT strongly connected") << "\n";

  if (!connected) {
    text << "hypothesis failure: the theorems require a strongly connected union\n";
    j["error"] = "union digraph is not strongly connected";
    std::cout << (json_out ? j.dump(2) + "\n" : text.str());
    return kHypothesisFailure;
  }

  // balance of the canonical (consistent) or safe-coefficient union
  double alpha = 1.0, beta = 1.0;
  if (!consistency.consistent) {
    std::tie(alpha, beta) = safe_union_coefficients(pair);
    log_debug("safe union coefficients alpha=1 beta=" + fmt(beta));
  }
  const SignedDigraph union_graph = union_adjacency(pair, alpha, beta);
  const BalanceResult bal = structural_balance(union_graph);
  j["union"]["alpha"] = alpha;
  j["union"]["beta"] = beta;
  j["balance"]["balanced"] = bal.balanced;
  text << "union coefficients: alpha=" << fmt(alpha) << ", beta=" << fmt(beta) << "\n";
  if (bal.balanced) {
    j["balance"]["gauge"] = gauge_json(bal.gauge);
    text << "structural balance: balanced, gauge " << gauge_label(bal.gauge) << "\n";
  } else {
    j["balance"]["conflict"] = {bal.conflict->first + 1, bal.conflict->second + 1};
    text << "structural balance: unbalanced, conflict arc " << arc_label(*bal.conflict)
         << "\n";
  }

  const auto [pred, gain] = predict(pair, in.delta, in.margin);
  const StabilityCertificate cert = pred.kind == OutcomeKind::Polarization
                                        ? certificate_balanced(pair, *pred.gauge)
                                        : certificate_unbalanced(pair);
  const Vector cert_ev = symmetric_eigenvalues(cert.matrix);
  const char* cert_name = cert.kind == CertificateKind::BalancedW ? "W" : "H";
  j["certificate"]["kind"] = cert_name;
  j["certificate"]["residual"] = cert.residual;
  j["certificate"]["lambda_min"] = cert_ev.front();
  text << "certificate: " << cert_name << " (" << cert.matrix.rows() << "x"
       << cert.matrix.cols() << "), residual " << fmt(cert.residual) << ", lambda_min "
       << fmt(cert_ev.front()) << "\n";

  j["gain"]["branch"] = consistency.consistent ? "mu" : "zeta";
  j["gain"]["delta"] = gain.delta;
  j["gain"]["index"] = gain.index;
  j["gain"]["margin"] = gain.margin;
  j["gain"]["k"] = gain.k;
  text << "gain: branch=" << (consistency.consistent ? "mu" : "zeta")
       << ", delta=" << fmt(gain.delta) << ", index=" << fmt(gain.index)
       << ", recommended k=" << fmt(gain.k) << " (margin " << fmt(gain.margin) << ")\n";

  if (!consistency.consistent) {
    const auto lemma6 = verify_lemma6(pair);
    j["m_matrix"]["core_is_m"] = lemma6.core_is_m;
    j["m_matrix"]["root_spanning_tree"] = lemma6.tree;
    text << "m-matrix checks: core " << (lemma6.core_is_m ? "passes" : "FAILS")
         << ", augmented root tree " << (lemma6.tree ? "passes" : "FAILS") << "\n";
  }

  j["prediction"] = outcome_name(pred.kind);
  text << "prediction: " << outcome_name(pred.kind) << "\n";

  std::cout << (json_out ? j.dump(2) + "\n" : text.str());
  return kOk;
}

// ------------------------------------------------------------------- gain --

int cmd_gain(const std::string& path, std::optional<double> delta_flag,
             std::optional<double> margin_flag, bool json_out) {
  const NetworkFile file = parse_network_file(path);
  const ResolvedInputs in = resolve_inputs(file);
  const double delta = delta_flag.value_or(in.delta);
  const double margin = margin_flag.value_or(in.margin);

  if (!is_strongly_connected(union_support(in.pair)))
    throw NotStronglyConnected("gain: the union digraph is not strongly connected");

  const bool consistent = sign_consistency(in.pair).consistent;
  GainAnalysis gain = consistent ? compute_mu(in.pair, delta) : compute_zeta(in.pair, delta);
  select_gain(gain, margin);

  std::string branch;
  if (!consistent)
    branch = "zeta (full Laplacian sum)";
  else if (gain.balanced_branch)
    branch = "mu (balanced: reduced gauged form)";
  else
    branch = "mu (unbalanced: full Laplacian sum)";

  if (json_out) {
    ordered_json j;
    j["branch"] = consistent ? "mu" : "zeta";
    j["balanced"] = gain.balanced_branch;
    j["delta"] = gain.delta;
    j["index"] = gain.index;
    j["margin"] = gain.margin;
    j["k"] = gain.k;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "branch: " << branch << "\n"
              << "delta: " << fmt(gain.delta) << "\n"
              << "index: " << fmt(gain.index) << "\n"
              << "k: " << fmt(gain.k) << " (margin " << fmt(gain.margin) << ")\n";
  }
  return kOk;
}

// --------------------------------------------------------------- simulate --

int cmd_simulate(const std::string& path, std::optional<double> h_flag,
                 std::optional<double> tmax_flag, const std::string& out_path,
                 bool json_out) {
  const NetworkFile file = parse_network_file(path);
  const ResolvedInputs in = resolve_inputs(file);

  SimParams params;
  if (h_flag) params.h = *h_flag;
  if (tmax_flag) params.t_max = *tmax_flag;
  if (!(params.h > 0.0)) throw std::invalid_argument("simulate: --h must be positive");
  if (!(params.t_max > 0.0)) throw std::invalid_argument("simulate: --tmax must be positive");

  // k from the file when given, otherwise from the analysis pipeline
  double k;
  std::optional<Prediction> pred;
  std::optional<std::string> theory_note;
  if (in.k) {
    k = *in.k;
    if (!(k > 0.0)) throw std::invalid_argument("simulate: k must be positive");
    log_info("using k=" + fmt(k) + " from the input file");
    // the theorems only cover k above the index; say which side we are on
    try {
      const auto [p, gain] = predict(in.pair, in.delta, in.margin);
      theory_note = k > gain.index
                        ? "applies (k > index " + fmt(gain.index) + ")"
                        : "inconclusive (k <= index " + fmt(gain.index) + ")";
    } catch (const std::exception&) {
      theory_note = "not applicable (hypotheses unmet)";
    }
  } else {
    auto [p, gain] = predict(in.pair, in.delta, in.margin);
    pred = p;
    k = gain.k;
    log_info("selected k=" + fmt(k) + " via the " +
             (sign_consistency(in.pair).consistent ? std::string("mu") : std::string("zeta")) +
             " branch");
  }

  const Trajectory traj = simulate(in.pair, k, in.x0, in.y0, params);
  const Outcome outcome = classify_outcome(traj, 1e-3);

  std::ofstream csv(out_path, std::ios::binary);
  if (!csv) throw std::invalid_argument("simulate: cannot open output file " + out_path);
  write_trajectory_csv(csv, traj);
  log_info("wrote " + std::to_string(traj.times.size()) + " samples to " + out_path);

  // deviation from the closed-form limit, when the theory provides one
  if (!pred && is_strongly_connected(union_support(in.pair)) &&
      sign_consistency(in.pair).consistent) {
    const auto bal = structural_balance(
        SignedDigraph::from_dense(in.pair.bc.adjacency() + in.pair.bd.adjacency()));
    if (bal.balanced) {
      Prediction p;
      p.kind = OutcomeKind::Polarization;
      p.gauge = bal.gauge;
      pred = p;
    }
  }
  std::optional<double> deviation;
  if (pred && pred->kind == OutcomeKind::Polarization) {
    const Vector limit = predicted_limit(in.pair, k, in.x0, in.y0, *pred->gauge);
    double dev = 0.0;
    for (std::size_t i = 0; i < limit.size(); ++i)
      dev = std::max(dev, std::abs(traj.back().x[i] - limit[i]));
    deviation = dev;
  }

  if (json_out) {
    ordered_json j;
    j["outcome"] = outcome_name(outcome.kind);
    if (outcome.kind == OutcomeKind::Polarization) {
      j["theta"] = outcome.theta;
      j["signs"] = outcome.signs;
    }
    if (outcome.kind == OutcomeKind::Inconclusive) j["reason"] = outcome.reason;
    j["k"] = k;
    j["t_end"] = traj.times.back();
    j["samples"] = traj.times.size();
    if (deviation) j["deviation"] = *deviation;
    if (theory_note) j["theory"] = *theory_note;
    j["csv"] = out_path;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "outcome: " << outcome_name(outcome.kind);
    if (outcome.kind == OutcomeKind::Polarization) std::cout << " theta=" << fmt(outcome.theta);
    if (outcome.kind == OutcomeKind::Inconclusive) std::cout << " (" << outcome.reason << ")";
    if (deviation) std::cout << " deviation=" << fmt(*deviation);
    std::cout << " k=" << fmt(k) << " t_end=" << fmt(traj.times.back());
    if (theory_note) std::cout << " theory=" << *theory_note;
    std::cout << " csv=" << out_path << "\n";
  }
  return kOk;
}

// ----------------------------------------------------------------- verify --

int cmd_verify(std::size_t n, int trials, std::uint64_t seed, const std::string& family_name,
               bool json_out) {
  if (n < 2) throw std::invalid_argument("verify: --n must be at least 2");
  if (trials < 1) throw std::invalid_argument("verify: --trials must be at least 1");
  const PairFamily family = pair_family_from_name(family_name);

  SplitMix64 rng(seed);
  int passed = 0, diverged = 0;
  ordered_json results = ordered_json::array();
  std::ostringstream text;

  for (int trial = 0; trial < trials; ++trial) {
    const NetworkPair pair = random_pair(family, n, rng);
    const Vector x0 = random_vector(n, rng), y0 = random_vector(n, rng);
    ordered_json r;
    r["trial"] = trial;
    try {
      const ReconcileReport rep = reconcile(pair, kDefaultDelta, kDefaultMargin, x0, y0);
      r["predicted"] = outcome_name(rep.prediction.kind);
      r["observed"] = outcome_name(rep.outcome.kind);
      r["deviation"] = rep.deviation;
      r["residual"] = rep.certificate_residual;
      r["k"] = rep.gain.k;
      r["pass"] = rep.pass;
      passed += rep.pass;
      text << "trial " << trial << ": " << (rep.pass ? "pass" : "FAIL") << " ("
           << outcome_name(rep.outcome.kind) << ", deviation " << fmt(rep.deviation)
           << ", k " << fmt(rep.gain.k) << ")\n";
    } catch (const DivergenceDetected& e) {
      r["pass"] = false;
      r["error"] = e.what();
      ++diverged;
      text << "trial " << trial << ": DIVERGED\n";
    }
    results.push_back(r);
  }

  text << passed << "/" << trials << " trials passed\n";
  if (json_out) {
    ordered_json j;
    j["family"] = family_name;
    j["n"] = n;
    j["trials"] = trials;
    j["passed"] = passed;
    j["seed"] = seed;
    j["results"] = results;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text.str();
  }
  if (diverged > 0) return kDivergence;
  return passed == trials ? kOk : kHypothesisFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signed-network analysis and simulation toolkit"};
  app.set_help_flag("--help", "print usage");  // frees -h / --h for the step size
  app.require_subcommand(1);

  std::string path, out_path = "traj.csv", family = "consistent-balanced";
  bool json_out = false;
  std::optional<double> delta_flag, margin_flag, h_flag, tmax_flag;
  std::size_t n = 4;
  int trials = 25;
  std::uint64_t seed = 0;

  auto* analyze = app.add_subcommand("analyze", "full decision pipeline report");
  analyze->add_option("file", path, "network file (JSON)")->required();
  analyze->add_flag("--json", json_out, "machine-readable output");

  auto* gain = app.add_subcommand("gain", "index (mu or zeta) and gain selection");
  gain->add_option("file", path, "network file (JSON)")->required();
  gain->add_option("--delta", delta_flag, "index parameter, must exceed 1");
  gain->add_option("--margin", margin_flag, "relative margin for k above the index");
  gain->add_flag("--json", json_out, "machine-readable output");

  auto* simulate = app.add_subcommand("simulate", "integrate and classify a trajectory");
  simulate->add_option("file", path, "network file (JSON)")->required();
  simulate->add_option("--h", h_flag, "integration step");
  simulate->add_option("--tmax", tmax_flag, "time horizon");
  simulate->add_option("--out", out_path, "trajectory CSV path");
  simulate->add_flag("--json", json_out, "machine-readable output");

  auto* verify = app.add_subcommand("verify", "randomized theorem verification");
  verify->add_option("--n", n, "agents per generated pair");
  verify->add_option("--trials", trials, "number of generated pairs");
  verify->add_option("--seed", seed, "generator seed");
  verify
      ->add_option("--family", family,
                   "consistent-balanced | consistent-unbalanced | inconsistent")
      ->required();
  verify->add_flag("--json", json_out, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(path, json_out);
    if (app.got_subcommand(gain)) return cmd_gain(path, delta_flag, margin_flag, json_out);
    if (app.got_subcommand(simulate))
      return cmd_simulate(path, h_flag, tmax_flag, out_path, json_out);
    return cmd_verify(n, trials, seed, family, json_out);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DeltaOutOfRange& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DivergenceDetected& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kDivergence;
  } catch (const NotStronglyConnected& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesisFailure;
  } catch (const std::exception& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesisFailure;
  }
}
