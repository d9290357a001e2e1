#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn::metrics {

/// s(t) = Hamming(x(t), x(t-1)) / n for t >= 1; element 0 is s(1).
inline std::vector<double> switching_rate(const Trajectory& traj) {
  if (traj.states.empty()) throw AnalysisError("switching_rate: trajectory has no agent states");
  if (traj.cadence != 1) throw AnalysisError("switching_rate: requires checkpoint cadence 1");
  std::vector<double> s;
  if (traj.n == 0) return s;
  for (std::size_t c = 1; c < traj.size(); ++c)
    s.push_back(static_cast<double>(hamming(traj.states[c], traj.states[c - 1])) / static_cast<double>(traj.n));
  return s;
}

/// counts[i][w] = switches of agent i during rounds [w*window+1, (w+1)*window].
/// Rounds missing after an early stop count as no switches.
inline std::vector<std::vector<double>> switch_counts(const Trajectory& traj, std::size_t horizon, std::size_t window) {
  if (traj.states.empty() || traj.cadence != 1) throw AnalysisError("switch_counts: requires a cadence-1 binary trajectory");
  if (window == 0 || horizon % window != 0) throw AnalysisError("switch_counts: window must divide the horizon");
  const std::size_t windows = horizon / window;
  std::vector<std::vector<double>> counts(traj.n, std::vector<double>(windows, 0.0));
  for (std::size_t c = 1; c < traj.size() && traj.t[c] <= horizon; ++c) {
    const std::size_t w = (traj.t[c] - 1) / window;
    for (std::size_t i = 0; i < traj.n; ++i) counts[i][w] += traj.states[c][i] != traj.states[c - 1][i];
  }
  return counts;
}

struct Conformity {
  double edge_agreement = 1.0;  // vacuously 1 without edges
  std::size_t regions = 0;
};

inline Conformity conformity_metrics(const Graph& g, std::span<const Action> x) {
  if (x.size() != g.node_count()) throw InputError("conformity_metrics: dimension mismatch");
  DisjointSets ds(g.node_count());
  std::size_t agree = 0;
  for (const Edge& e : g.edges()) {
    if (x[e.u] == x[e.v]) {
      ++agree;
      ds.unite(e.u, e.v);
    }
  }
  Conformity out;
  if (g.edge_count() > 0) out.edge_agreement = static_cast<double>(agree) / static_cast<double>(g.edge_count());
  out.regions = ds.count();
  return out;
}

struct SShape {
  bool monotone = true;
  std::size_t inflections = 0;
};

/// Monotonicity plus sign changes of the second difference after a centered
/// moving average of width 5 (full windows only). Smoothed values whose
/// magnitude is below 1e-9 of the largest one count as zero and are skipped,
/// so rounding noise in saturated tails does not register as inflections.
inline SShape s_shape_check(std::span<const double> series) {
  if (series.size() < 3) throw AnalysisError("s_shape_check: need at least 3 values");
  SShape out;
  for (std::size_t t = 1; t < series.size(); ++t)
    if (series[t] < series[t - 1]) out.monotone = false;

  std::vector<double> d2;
  for (std::size_t t = 1; t + 1 < series.size(); ++t) d2.push_back(series[t + 1] - 2.0 * series[t] + series[t - 1]);
  constexpr std::size_t width = 5;
  std::vector<double> smooth;
  if (d2.size() >= width) {
    for (std::size_t t = 0; t + width <= d2.size(); ++t) {
      double s = 0.0;
      for (std::size_t k = 0; k < width; ++k) s += d2[t + k];
      smooth.push_back(s / width);
    }
  } else {
    smooth = d2;
  }
  double peak = 0.0;
  for (double v : smooth) peak = std::max(peak, std::fabs(v));
  const double floor = 1e-9 * peak;
  int last_sign = 0;
  for (double v : smooth) {
    if (std::fabs(v) <= floor) continue;
    const int sign = v > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++out.inflections;
    last_sign = sign;
  }
  return out;
}

}  // namespace normdyn::metrics
