#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn::cascade {

/// Per-agent thresholds in [0, 1]. An agent with threshold 0 is a seed.
class ThresholdProfile {
 public:
  ThresholdProfile() = default;

  explicit ThresholdProfile(std::vector<double> theta) : theta_(std::move(theta)) {
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      if (!(theta_[i] >= 0.0 && theta_[i] <= 1.0)) {
        throw InputError("threshold of agent " + std::to_string(i) + " outside [0,1]");
      }
    }
  }

  static ThresholdProfile uniform(std::size_t n, double theta) { return ThresholdProfile(std::vector<double>(n, theta)); }

  static ThresholdProfile with_seeds(std::size_t n, double theta, std::span<const NodeId> seeds) {
    std::vector<double> v(n, theta);
    for (NodeId s : seeds) {
      if (s >= n) throw InputError("seed " + std::to_string(s) + " out of range");
      v[s] = 0.0;
    }
    return ThresholdProfile(std::move(v));
  }

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const { return theta_[i]; }
  bool is_seed(std::size_t i) const { return theta_[i] == 0.0; }
  std::span<const double> values() const noexcept { return theta_; }

  ThresholdProfile with_seed(NodeId i) const {
    ThresholdProfile copy = *this;
    copy.theta_.at(i) = 0.0;
    return copy;
  }

 private:
  std::vector<double> theta_;
};

// at_least follows the equation (exposure >= theta); strict requires exposure > theta.
enum class Comparison { at_least, strict };

/// One synchronous update. Adoption is absorbing; seeds adopt regardless of
/// neighbors; an isolated non-seed agent has exposure 0 and never adopts.
inline StateVector step(const Graph& g, std::span<const Action> x, const ThresholdProfile& theta,
                        Comparison cmp = Comparison::at_least) {
  const std::size_t n = g.node_count();
  if (x.size() != n || theta.size() != n) throw InputError("ltm_step: dimension mismatch");
  StateVector next(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] || theta.is_seed(i)) {
      next[i] = 1;
      continue;
    }
    const std::size_t d = g.degree(i);
    if (d == 0) continue;
    std::size_t active = 0;
    for (NodeId j : g.neighbors(i)) active += x[j];
    const double exposure = static_cast<double>(active) / static_cast<double>(d);
    next[i] = cmp == Comparison::strict ? exposure > theta[i] : exposure >= theta[i];
  }
  return next;
}

/// Runs from the all-status-quo state until a fixed point (or max_steps
/// transitions). Checkpoint 0 is the all-zero state; seeds appear at t = 1.
inline Trajectory run(const Graph& g, const ThresholdProfile& theta, std::optional<std::size_t> max_steps = std::nullopt,
                      Comparison cmp = Comparison::at_least) {
  const std::size_t n = g.node_count();
  if (theta.size() != n) throw InputError("run_cascade: dimension mismatch");
  const std::size_t budget = max_steps.value_or(n + 1);

  Trajectory traj;
  traj.n = n;
  traj.pinned.resize(n);
  for (std::size_t i = 0; i < n; ++i) traj.pinned[i] = theta.is_seed(i);

  StateVector x(n, 0);
  traj.record(0, x);
  for (std::size_t t = 1;; ++t) {
    StateVector next = step(g, x, theta, cmp);
    if (next == x) {
      traj.terminal = Terminal::fixed_point;
      break;
    }
    if (t > budget) {
      traj.terminal = Terminal::budget;
      break;
    }
    x = std::move(next);
    traj.record(t, x);
  }
  return traj;
}

inline double final_adoption(const Graph& g, const ThresholdProfile& theta, Comparison cmp = Comparison::at_least) {
  return run(g, theta, std::nullopt, cmp).z.back();
}

struct SeedSelection {
  std::vector<NodeId> seeds;  // in selection order
  double spread = 0.0;
};

/// Greedy influence maximization: each round converts the node whose seeding
/// yields the largest final adoption, lowest index on ties. No approximation
/// guarantee; the deterministic threshold spread is not submodular in general.
inline SeedSelection greedy_seed_selection(const Graph& g, const ThresholdProfile& base, std::size_t k,
                                           Comparison cmp = Comparison::at_least) {
  const std::size_t n = g.node_count();
  if (base.size() != n) throw InputError("greedy_seed_selection: dimension mismatch");
  if (k > n) throw InputError("greedy_seed_selection: k exceeds node count");

  SeedSelection out;
  ThresholdProfile current = base;
  out.spread = final_adoption(g, current, cmp);
  std::vector<bool> chosen(n, false);
  for (std::size_t round = 0; round < k; ++round) {
    std::optional<NodeId> best;
    double best_spread = -1.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (chosen[v]) continue;
      const double s = final_adoption(g, current.with_seed(NodeId(v)), cmp);
      if (s > best_spread) {
        best_spread = s;
        best = NodeId(v);
      }
    }
    chosen[*best] = true;
    out.seeds.push_back(*best);
    current = current.with_seed(*best);
    out.spread = best_spread;
  }
  return out;
}

struct ExposureRecord {
  std::optional<std::size_t> adopt_time;  // first checkpoint time with x_i = 1
  std::optional<double> exposure;         // undefined for seeds, non-adopters, isolated agents
};

/// Share of neighbors already adopting at the step before each agent adopts.
/// Needs a cadence-1 binary trajectory.
inline std::vector<ExposureRecord> exposure_at_adoption(const Trajectory& traj, const Graph& g) {
  const std::size_t n = g.node_count();
  if (traj.states.empty()) throw AnalysisError("exposure_at_adoption: trajectory has no agent states");
  if (traj.n != n) throw AnalysisError("exposure_at_adoption: trajectory and graph sizes differ");
  if (traj.cadence != 1) throw AnalysisError("exposure_at_adoption: requires checkpoint cadence 1");

  std::vector<ExposureRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::size_t> first;
    for (std::size_t c = 0; c < traj.size(); ++c) {
      if (traj.states[c][i]) {
        first = c;
        break;
      }
    }
    if (!first) continue;
    out[i].adopt_time = traj.t[*first];
    const bool pinned = !traj.pinned.empty() && traj.pinned[i];
    if (*first == 0 || pinned || g.degree(i) == 0) continue;
    const auto& before = traj.states[*first - 1];
    std::size_t active = 0;
    for (NodeId j : g.neighbors(i)) active += before[j];
    out[i].exposure = static_cast<double>(active) / static_cast<double>(g.degree(i));
  }
  return out;
}

}  // namespace normdyn::cascade
