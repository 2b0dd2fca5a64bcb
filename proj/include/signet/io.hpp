#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/matrix.hpp"
#include "signet/sgraph.hpp"

namespace signet {

// Parsed network input document. Dense arrays (zeros = no arc) keep the
// zero/sign semantics unambiguous. Agent labels are 1-indexed in all
// user-facing diagnostics.
struct NetworkFile {
  std::size_t n = 0;
  Matrix bc;
  Matrix bd;
  std::optional<Vector> x0;
  std::optional<Vector> y0;
  std::optional<double> k;
  std::optional<double> delta;
  std::optional<double> margin;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline Matrix parse_dense(const nlohmann::json& j, const std::string& name, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(name + ": expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != n)
      throw ParseError(name + " row " + std::to_string(i + 1) + ": expected " +
                       std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      if (!row[c].is_number())
        throw ParseError(name + "[" + std::to_string(i + 1) + "][" + std::to_string(c + 1) +
                         "]: expected a number");
      const double v = row[c].get<double>();
      if (!std::isfinite(v))
        throw ParseError(name + "[" + std::to_string(i + 1) + "][" + std::to_string(c + 1) +
                         "]: entry must be finite");
      if (i == c && v != 0.0)
        throw ParseError(name + "[" + std::to_string(i + 1) + "][" + std::to_string(c + 1) +
                         "]: diagonal entry must be zero");
      m(i, c) = v;
    }
  }
  return m;
}

inline Vector parse_vector(const nlohmann::json& j, const std::string& name, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(name + ": expected " + std::to_string(n) + " entries");
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_number())
      throw ParseError(name + "[" + std::to_string(i + 1) + "]: expected a number");
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i]))
      throw ParseError(name + "[" + std::to_string(i + 1) + "]: entry must be finite");
  }
  return v;
}

}  // namespace detail

inline NetworkFile parse_network_json(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(origin + ": top-level value must be an object");
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::uint64_t>() == 0)
    throw ParseError(origin + ": field 'n' must be a positive integer");

  NetworkFile f;
  f.n = j["n"].get<std::size_t>();
  if (!j.contains("Bc")) throw ParseError(origin + ": missing field 'Bc'");
  if (!j.contains("Bd")) throw ParseError(origin + ": missing field 'Bd'");
  f.bc = detail::parse_dense(j["Bc"], "Bc", f.n);
  f.bd = detail::parse_dense(j["Bd"], "Bd", f.n);
  if (j.contains("x0")) f.x0 = detail::parse_vector(j["x0"], "x0", f.n);
  if (j.contains("y0")) f.y0 = detail::parse_vector(j["y0"], "y0", f.n);
  for (const char* scalar : {"k", "delta", "margin"}) {
    if (!j.contains(scalar)) continue;
    if (!j[scalar].is_number())
      throw ParseError(origin + ": field '" + std::string(scalar) + "' must be a number");
    const double v = j[scalar].get<double>();
    if (scalar[0] == 'k')
      f.k = v;
    else if (scalar[0] == 'd')
      f.delta = v;
    else
      f.margin = v;
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw ParseError(origin + ": field 'seed' must be a nonnegative integer");
    f.seed = j["seed"].get<std::uint64_t>();
  }
  return f;
}

inline NetworkFile parse_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_json(buf.str(), path);
}

inline NetworkPair to_pair(const NetworkFile& f) {
  return NetworkPair{SignedDigraph::from_dense(f.bc), SignedDigraph::from_dense(f.bd)};
}

// 17 significant digits round-trips doubles exactly.
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Header t,x1..xn,y1..yn; full double precision; LF line endings.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().x.size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",y" << i;
  out << "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    out << format_full(traj.times[s]);
    for (double v : traj.states[s].x) out << "," << format_full(v);
    for (double v : traj.states[s].y) out << "," << format_full(v);
    out << "\n";
  }
}

inline Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory csv: missing header");
  std::size_t cols = 1;
  for (char c : line) cols += c == ',';
  if (cols < 3 || (cols - 1) % 2 != 0)
    throw ParseError("trajectory csv: header must be t,x1..xn,y1..yn");
  const std::size_t n = (cols - 1) / 2;

  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("trajectory csv: bad number '" + cell + "'");
      }
    }
    if (vals.size() != cols) throw ParseError("trajectory csv: ragged row");
    State s{Vector(vals.begin() + 1, vals.begin() + 1 + n),
            Vector(vals.begin() + 1 + n, vals.end())};
    traj.times.push_back(vals[0]);
    traj.states.push_back(std::move(s));
  }
  if (traj.times.empty()) throw ParseError("trajectory csv: no samples");
  return traj;
}

}  // namespace signet
