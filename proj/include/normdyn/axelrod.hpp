#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/random.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn::cultures {

/// n agents, each with m binary cultural traits, stored row-major.
class CultureState {
 public:
  CultureState(std::size_t n, std::size_t m) : n_(n), m_(m), traits_(n * m, 0) {
    if (m == 0) throw InputError("culture: need at least one trait");
  }

  CultureState(std::size_t n, std::size_t m, std::vector<Action> traits) : n_(n), m_(m), traits_(std::move(traits)) {
    if (m == 0) throw InputError("culture: need at least one trait");
    if (traits_.size() != n * m) throw InputError("culture: trait table has wrong size");
    for (Action a : traits_)
      if (a > 1) throw InputError("culture: traits must be binary");
  }

  static CultureState random(std::size_t n, std::size_t m, Rng& rng) {
    CultureState c(n, m);
    for (Action& a : c.traits_) a = static_cast<Action>(rng.next() >> 63);
    return c;
  }

  std::size_t agents() const noexcept { return n_; }
  std::size_t traits() const noexcept { return m_; }

  std::span<const Action> of(std::size_t i) const { return {traits_.data() + i * m_, m_}; }
  Action& at(std::size_t i, std::size_t k) { return traits_[i * m_ + k]; }
  Action at(std::size_t i, std::size_t k) const { return traits_[i * m_ + k]; }

  std::size_t shared(std::size_t i, std::size_t j) const {
    std::size_t s = 0;
    for (std::size_t k = 0; k < m_; ++k) s += (at(i, k) == at(j, k));
    return s;
  }

  double similarity(std::size_t i, std::size_t j) const {
    return static_cast<double>(shared(i, j)) / static_cast<double>(m_);
  }

  bool operator==(const CultureState&) const = default;

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<Action> traits_;
};

// Edge whose endpoints are neither identical nor fully dissimilar.
inline bool edge_active(const CultureState& c, std::size_t i, std::size_t j) {
  const std::size_t s = c.shared(i, j);
  return s > 0 && s < c.traits();
}

struct StepResult {
  std::size_t agent = 0;
  std::optional<std::size_t> trait;  // set when an entry was copied
};

/// One interaction: uniform agent i, uniform neighbor j; with probability equal
/// to their similarity, i copies one uniformly chosen disagreeing trait of j.
/// A draw of an isolated agent is a wasted step.
inline StepResult axelrod_step(const Graph& g, CultureState& c, Rng& rng) {
  const std::size_t n = g.node_count();
  if (c.agents() != n) throw InputError("axelrod_step: dimension mismatch");
  StepResult r;
  r.agent = static_cast<std::size_t>(rng.below(n));
  const auto nb = g.neighbors(r.agent);
  if (nb.empty()) return r;
  const NodeId j = nb[rng.below(nb.size())];
  const std::size_t m = c.traits();
  const std::size_t shared = c.shared(r.agent, j);
  if (shared == m) return r;
  if (!(rng.uniform() < static_cast<double>(shared) / static_cast<double>(m))) return r;
  auto pick = static_cast<std::size_t>(rng.below(m - shared));
  for (std::size_t k = 0; k < m; ++k) {
    if (c.at(r.agent, k) == c.at(j, k)) continue;
    if (pick-- == 0) {
      c.at(r.agent, k) = c.at(j, k);
      r.trait = k;
      break;
    }
  }
  return r;
}

// Components of the subgraph keeping only edges between identical cultures.
inline DisjointSets cultural_components(const Graph& g, const CultureState& c) {
  DisjointSets ds(g.node_count());
  for (const Edge& e : g.edges())
    if (c.shared(e.u, e.v) == c.traits()) ds.unite(e.u, e.v);
  return ds;
}

inline std::size_t count_cultural_regions(const Graph& g, const CultureState& c) {
  return cultural_components(g, c).count();
}

inline bool is_absorbing(const Graph& g, const CultureState& c) {
  for (const Edge& e : g.edges())
    if (edge_active(c, e.u, e.v)) return false;
  return true;
}

struct RegionCheckpoint {
  std::size_t step = 0;
  std::size_t regions = 0;
  double largest_region_fraction = 0.0;
};

struct AxelrodRun {
  CultureState final_state;
  std::vector<RegionCheckpoint> checkpoints;
  bool absorbing = false;
  std::size_t steps = 0;
};

inline RegionCheckpoint region_checkpoint(const Graph& g, const CultureState& c, std::size_t step) {
  auto ds = cultural_components(g, c);
  const double n = static_cast<double>(std::max<std::size_t>(1, g.node_count()));
  return {step, ds.count(), static_cast<double>(ds.largest()) / n};
}

/// Iterates axelrod_step until no edge is active or max_steps is spent.
/// The active-edge count is maintained incrementally, so absorption is
/// detected on the exact step it happens.
inline AxelrodRun run_axelrod(const Graph& g, CultureState init, std::size_t max_steps, std::size_t checkpoint_every,
                              Rng& rng) {
  if (init.agents() != g.node_count()) throw InputError("run_axelrod: dimension mismatch");
  if (checkpoint_every == 0) checkpoint_every = std::max<std::size_t>(1, g.node_count());
  AxelrodRun run{std::move(init), {}, false, 0};
  CultureState& c = run.final_state;

  std::size_t active = 0;
  for (const Edge& e : g.edges()) active += edge_active(c, e.u, e.v);
  run.checkpoints.push_back(region_checkpoint(g, c, 0));

  while (active > 0 && run.steps < max_steps) {
    const auto r = axelrod_step(g, c, rng);
    ++run.steps;
    if (r.trait) {
      const std::size_t i = r.agent, k = *r.trait;
      const std::size_t m = c.traits();
      for (NodeId j : g.neighbors(i)) {
        const std::size_t now = c.shared(i, j);
        // Only trait k changed, so the previous agreement count differs by one.
        const std::size_t prev = c.at(i, k) == c.at(j, k) ? now - 1 : now + 1;
        const bool was = prev > 0 && prev < m;
        const bool is = now > 0 && now < m;
        active = active - was + is;
      }
    }
    if (run.steps % checkpoint_every == 0) run.checkpoints.push_back(region_checkpoint(g, c, run.steps));
  }
  run.absorbing = active == 0;
  if (run.checkpoints.back().step != run.steps) run.checkpoints.push_back(region_checkpoint(g, c, run.steps));
  return run;
}

}  // namespace normdyn::cultures
