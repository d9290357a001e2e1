#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "normdyn/csv.hpp"
#include "normdyn/error.hpp"

namespace normdyn {

// Binary convention choice: 0 status quo, 1 innovation.
using Action = std::uint8_t;
using StateVector = std::vector<Action>;

inline double adoption_fraction(std::span<const Action> x) {
  if (x.empty()) return 0.0;
  std::size_t ones = 0;
  for (Action a : x) ones += a;
  return static_cast<double>(ones) / static_cast<double>(x.size());
}

inline std::size_t hamming(std::span<const Action> a, std::span<const Action> b) {
  if (a.size() != b.size()) throw InputError("hamming: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

enum class Terminal { fixed_point, consensus, budget };

inline const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::fixed_point: return "fixed_point";
    case Terminal::consensus: return "consensus";
    case Terminal::budget: return "budget";
  }
  return "budget";
}

/// Time-indexed record of a run.
///
/// Binary-state models fill `states` (one per checkpoint) and keep
/// z[c] == adoption_fraction(states[c]). Population-level runs (Bass) and the
/// Naming Game leave `states` empty; for the latter z is the uptake series.
/// switches[c] is the Hamming distance between checkpoints c-1 and c
/// (0 at c = 0). `pinned` marks agents whose state is not driven by peers:
/// cascade seeds or committed agents.
struct Trajectory {
  std::size_t n = 0;
  std::size_t cadence = 1;
  std::vector<std::size_t> t;
  std::vector<StateVector> states;
  std::vector<double> z;
  std::vector<std::size_t> switches;
  std::vector<Action> pinned;
  Terminal terminal = Terminal::budget;

  std::size_t size() const noexcept { return t.size(); }

  void record(std::size_t time, StateVector x) {
    switches.push_back(states.empty() ? 0 : hamming(states.back(), x));
    z.push_back(adoption_fraction(x));
    t.push_back(time);
    states.push_back(std::move(x));
  }

  void record_value(std::size_t time, double value) {
    t.push_back(time);
    z.push_back(value);
    switches.push_back(0);
  }
};

// "t,agent_0,...,agent_{n-1},z" for binary-state runs; "t,z" otherwise.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const bool with_states = !traj.states.empty();
  out << 't';
  if (with_states)
    for (std::size_t i = 0; i < traj.n; ++i) out << ",agent_" << i;
  out << ",z\n";
  for (std::size_t c = 0; c < traj.size(); ++c) {
    out << traj.t[c];
    if (with_states)
      for (Action a : traj.states[c]) out << ',' << int(a);
    out << ',' << csv::num(traj.z[c]) << '\n';
  }
}

// Inverse of write_trajectory_csv for binary-state files.
inline Trajectory parse_trajectory_csv(std::istream& in) {
  const auto table = csv::parse(in);
  if (table.header.size() < 2 || table.header.front() != "t" || table.header.back() != "z") {
    throw ParseError(1, "trajectory header must be 't,...,z'");
  }
  Trajectory traj;
  traj.n = table.header.size() - 2;
  for (std::size_t i = 0; i < traj.n; ++i) {
    if (table.header[i + 1] != "agent_" + std::to_string(i)) throw ParseError(1, "expected column agent_" + std::to_string(i));
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.row_lines[r];
    const double tv = csv::to_double(row[0], line);
    if (!(tv >= 0) || tv != static_cast<double>(static_cast<std::size_t>(tv))) throw ParseError(line, "bad time");
    if (traj.n == 0) {
      traj.record_value(static_cast<std::size_t>(tv), csv::to_double(row.back(), line));
      continue;
    }
    StateVector x(traj.n);
    for (std::size_t i = 0; i < traj.n; ++i) {
      const auto& cell = row[i + 1];
      if (cell != "0" && cell != "1") throw ParseError(line, "agent state must be 0 or 1");
      x[i] = cell == "1";
    }
    traj.record(static_cast<std::size_t>(tv), std::move(x));
  }
  if (traj.size() >= 2) traj.cadence = traj.t[1] - traj.t[0];
  for (std::size_t c = 1; c < traj.size(); ++c) {
    if (traj.t[c] - traj.t[c - 1] != traj.cadence) traj.cadence = 0;  // irregular
  }
  traj.pinned.assign(traj.n, 0);
  return traj;
}

}  // namespace normdyn
