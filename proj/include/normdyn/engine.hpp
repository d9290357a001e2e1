#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "normdyn/axelrod.hpp"
#include "normdyn/bass.hpp"
#include "normdyn/cascade.hpp"
#include "normdyn/committed.hpp"
#include "normdyn/config.hpp"
#include "normdyn/csv.hpp"
#include "normdyn/edge_list.hpp"
#include "normdyn/games.hpp"
#include "normdyn/generators.hpp"
#include "normdyn/naming_game.hpp"
#include "normdyn/parallel.hpp"
#include "normdyn/random.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn::engine {

// Independent sub-streams of the run seed.
enum Stream : std::uint64_t { dynamics = 1, committed_draw = 2, initial_draw = 3 };

struct ResolvedGraph {
  Graph graph;
  std::vector<std::string> labels;
  bool relabeled = false;
};

inline ResolvedGraph resolve_graph(const SimConfig& cfg) {
  ResolvedGraph out;
  if (cfg.graph.file) {
    auto file = read_edge_list(*cfg.graph.file);
    out.graph = std::move(file.graph);
    out.labels = std::move(file.labels);
    out.relabeled = file.relabeled;
    return out;
  }
  try {
    out.graph = generate(cfg.graph.kind, cfg.graph.n, cfg.graph.seed.value_or(cfg.seed));
  } catch (const InputError& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
  return out;
}

struct RunOutput {
  Trajectory trajectory;
  ResolvedGraph graph;
  std::optional<cascade::ThresholdProfile> thresholds;   // cascade runs
  std::vector<cultures::RegionCheckpoint> regions;        // Axelrod runs
  std::vector<Action> consensus_flags;                     // Naming Game runs
};

// Keeps every cadence-th checkpoint plus the last one; switch counts are
// recomputed between the kept states.
inline Trajectory thin(const Trajectory& full, std::size_t cadence) {
  if (cadence <= 1) return full;
  Trajectory out;
  out.n = full.n;
  out.cadence = cadence;
  out.pinned = full.pinned;
  out.terminal = full.terminal;
  for (std::size_t c = 0; c < full.size(); ++c) {
    const bool keep = full.t[c] % cadence == 0 || c + 1 == full.size();
    if (!keep) continue;
    if (full.states.empty()) out.record_value(full.t[c], full.z[c]);
    else out.record(full.t[c], full.states[c]);
  }
  return out;
}

inline cascade::ThresholdProfile thresholds_for(const SimConfig& cfg, std::size_t n) {
  const auto& c = cfg.cascade;
  std::vector<double> theta;
  if (c.theta.empty()) theta.assign(n, 0.5);
  else if (c.theta.size() == 1) theta.assign(n, c.theta.front());
  else if (c.theta.size() == n) theta = c.theta;
  else throw ConfigError("cascade.theta must be a number or have one entry per node");
  for (NodeId s : c.seeds) {
    if (s >= n) throw ConfigError("cascade.seeds: node " + std::to_string(s) + " out of range");
    theta[s] = 0.0;
  }
  try {
    return cascade::ThresholdProfile(std::move(theta));
  } catch (const InputError& e) {
    throw ConfigError(std::string("cascade.theta: ") + e.what());
  }
}

inline games::GameSpec game_spec_for(const GameSection& s, std::size_t n) {
  games::GameSpec spec;
  spec.rule = s.rule;
  spec.beta = s.beta;
  spec.schedule = s.schedule;
  spec.trend_scope = s.trend_scope;
  switch (s.form) {
    case GameSection::PayoffForm::matrix: spec.payoff = s.matrix; break;
    case GameSection::PayoffForm::coordination: spec.payoff = games::Coordination{s.alpha}; break;
    case GameSection::PayoffForm::extended: {
      games::ExtendedParams ext;
      if (s.classes.empty()) throw ConfigError("game.payoff.classes must not be empty");
      for (const auto& c : s.classes) ext.classes.push_back(c.weights);
      if (!s.assignment.empty()) {
        ext.class_of = s.assignment;
      } else {
        // Agents in index order, class sizes round(fraction * n); the last class takes the rest.
        ext.class_of.assign(n, static_cast<std::uint32_t>(s.classes.size() - 1));
        std::size_t at = 0;
        for (std::size_t c = 0; c + 1 < s.classes.size(); ++c) {
          const auto size = static_cast<std::size_t>(std::llround(s.classes[c].fraction * static_cast<double>(n)));
          for (std::size_t k = 0; k < size && at < n; ++k) ext.class_of[at++] = static_cast<std::uint32_t>(c);
        }
      }
      spec.payoff = std::move(ext);
      break;
    }
  }
  try {
    games::validate(spec, n);
  } catch (const Error& e) {
    throw ConfigError(std::string("game: ") + e.what());
  }
  return spec;
}

inline CommittedSet committed_for(const CommittedSpec& s, std::size_t n, Rng& rng) {
  CommittedSet c;
  try {
    c = s.fraction ? CommittedSet::random_fraction(n, *s.fraction, rng) : CommittedSet::of(n, s.agents);
  } catch (const InputError& e) {
    throw ConfigError(std::string("game.committed: ") + e.what());
  }
  c.action = s.action;
  c.prior_action = s.prior_action;
  c.switch_round = s.switch_round;
  return c;
}

inline StateVector initial_for(const InitialState& s, std::size_t n, Rng& rng) {
  switch (s.kind) {
    case InitialState::Kind::fill: return StateVector(n, s.action);
    case InitialState::Kind::bernoulli: {
      StateVector x(n);
      for (auto& a : x) a = rng.bernoulli(s.p);
      return x;
    }
    case InitialState::Kind::explicit_states:
      if (s.states.size() != n) throw ConfigError("game.initial.states must have one entry per node");
      return s.states;
  }
  return StateVector(n, 0);
}

/// Runs one configuration. Output is a pure function of the configuration
/// (including its seed) and the contents of any referenced graph file.
inline RunOutput run(const SimConfig& cfg) {
  RunOutput out;
  const Rng root(cfg.seed);
  switch (cfg.model) {
    case Model::bass: {
      std::optional<bass::BassParams> params;
      try {
        params.emplace(cfg.bass.p, cfg.bass.q);
        bass::check_fraction(cfg.bass.z0, "bass.z0");
      } catch (const DomainError& e) {
        throw ConfigError(std::string("bass: ") + e.what());
      }
      const auto series = bass::trajectory(cfg.bass.z0, *params, cfg.horizon);
      Trajectory traj;
      for (std::size_t t = 0; t < series.size(); ++t) traj.record_value(t, series[t]);
      traj.terminal = series.back() == 1.0 ? Terminal::fixed_point : Terminal::budget;
      out.trajectory = thin(traj, cfg.cadence);
      return out;
    }
    case Model::cascade: {
      out.graph = resolve_graph(cfg);
      const std::size_t n = out.graph.graph.node_count();
      out.thresholds = thresholds_for(cfg, n);
      const auto cmp = cfg.cascade.strict ? cascade::Comparison::strict : cascade::Comparison::at_least;
      out.trajectory = thin(cascade::run(out.graph.graph, *out.thresholds, cfg.horizon, cmp), cfg.cadence);
      return out;
    }
    case Model::axelrod: {
      out.graph = resolve_graph(cfg);
      const std::size_t n = out.graph.graph.node_count();
      const std::size_t m = cfg.axelrod.traits;
      if (m == 0) throw ConfigError("axelrod.traits must be positive");
      std::optional<cultures::CultureState> init;
      if (cfg.axelrod.init.empty()) {
        Rng draw = root.split(initial_draw);
        init = cultures::CultureState::random(n, m, draw);
      } else {
        if (cfg.axelrod.init.size() != n) throw ConfigError("axelrod.init must have one row per node");
        std::vector<Action> flat;
        for (const auto& row : cfg.axelrod.init) {
          if (row.size() != m) throw ConfigError("axelrod.init rows must have 'traits' entries");
          flat.insert(flat.end(), row.begin(), row.end());
        }
        try {
          init.emplace(n, m, std::move(flat));
        } catch (const InputError& e) {
          throw ConfigError(std::string("axelrod.init: ") + e.what());
        }
      }
      Rng rng = root.split(dynamics);
      auto res = cultures::run_axelrod(out.graph.graph, std::move(*init), cfg.horizon,
                                       cfg.axelrod.checkpoint_every, rng);
      Trajectory traj;
      traj.n = n;
      traj.cadence = 0;
      for (const auto& cp : res.checkpoints) traj.record_value(cp.step, cp.largest_region_fraction);
      traj.terminal = res.absorbing ? Terminal::fixed_point : Terminal::budget;
      out.trajectory = std::move(traj);
      out.regions = std::move(res.checkpoints);
      return out;
    }
    case Model::naming_game: {
      out.graph = resolve_graph(cfg);
      cultures::NamingGameOptions opt;
      opt.objects = cfg.naming_game.objects;
      opt.committed_fraction = cfg.naming_game.committed_fraction;
      opt.committed_word = cfg.naming_game.committed_word;
      opt.pre_consensus = cfg.naming_game.pre_consensus;
      opt.pre_consensus_rounds = cfg.naming_game.pre_consensus_rounds;
      opt.max_rounds = cfg.horizon;
      if (opt.objects == 0) throw ConfigError("naming_game.objects must be positive");
      if (!(opt.committed_fraction >= 0.0 && opt.committed_fraction <= 1.0))
        throw ConfigError("naming_game.committed_fraction must lie in [0,1]");
      Rng rng = root.split(dynamics);
      auto res = cultures::run_naming_game(out.graph.graph, opt, rng);
      out.consensus_flags = std::move(res.consensus_flags);
      out.trajectory = std::move(res.uptake);
      if (cfg.cadence > 1) {
        Trajectory thinned = thin(out.trajectory, cfg.cadence);
        std::vector<Action> flags;
        for (std::size_t c = 0, k = 0; c < out.trajectory.size() && k < thinned.size(); ++c)
          if (out.trajectory.t[c] == thinned.t[k]) flags.push_back(out.consensus_flags[c]), ++k;
        out.trajectory = std::move(thinned);
        out.consensus_flags = std::move(flags);
      }
      return out;
    }
    case Model::game: {
      out.graph = resolve_graph(cfg);
      const std::size_t n = out.graph.graph.node_count();
      const auto spec = game_spec_for(cfg.game, n);
      Rng commit_rng = root.split(committed_draw);
      const auto committed = committed_for(cfg.game.committed, n, commit_rng);
      Rng init_rng = root.split(initial_draw);
      auto x0 = initial_for(cfg.game.initial, n, init_rng);
      Rng rng = root.split(dynamics);
      out.trajectory = thin(games::run_game(out.graph.graph, std::move(x0), spec, committed, cfg.horizon, rng), cfg.cadence);
      return out;
    }
  }
  throw ConfigError("unresolved model");
}

// Share of non-pinned agents in state 1 at the final checkpoint; for
// population-level trajectories, the final z.
inline double terminal_uptake(const Trajectory& traj) {
  if (traj.states.empty()) return traj.z.empty() ? 0.0 : traj.z.back();
  const auto& x = traj.states.back();
  std::size_t free = 0, adopted = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!traj.pinned.empty() && traj.pinned[i]) continue;
    ++free;
    adopted += x[i];
  }
  return free == 0 ? 1.0 : static_cast<double>(adopted) / static_cast<double>(free);
}

namespace detail {

// Pairwise summation keeps the mean independent of how values were produced.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

inline double mean(std::span<const double> v) {
  return v.empty() ? std::nan("") : detail::pairwise_sum(v) / static_cast<double>(v.size());
}

// Linear interpolation between order statistics (the common "type 7" rule).
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct TerminalRow {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double final_z = 0.0;
  Terminal terminal = Terminal::budget;
};

struct EnsembleSummary {
  std::vector<std::size_t> t;
  std::vector<double> mean_z, q10, q50, q90;
  std::vector<TerminalRow> runs;
};

/// Replicates with seeds base_seed .. base_seed+reps-1. A run that stopped
/// early (fixed point or consensus) contributes its last value to later times.
inline EnsembleSummary summarize(const std::vector<Trajectory>& trajs, std::uint64_t base_seed) {
  EnsembleSummary out;
  std::vector<std::size_t> times;
  for (const auto& tr : trajs) times.insert(times.end(), tr.t.begin(), tr.t.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  out.t = times;

  std::vector<std::size_t> cursor(trajs.size(), 0);
  std::vector<double> column(trajs.size());
  for (std::size_t tau : times) {
    for (std::size_t r = 0; r < trajs.size(); ++r) {
      const auto& tr = trajs[r];
      while (cursor[r] + 1 < tr.size() && tr.t[cursor[r] + 1] <= tau) ++cursor[r];
      column[r] = tr.z[cursor[r]];
    }
    out.mean_z.push_back(mean(column));
    out.q10.push_back(quantile(column, 0.1));
    out.q50.push_back(quantile(column, 0.5));
    out.q90.push_back(quantile(column, 0.9));
  }
  for (std::size_t r = 0; r < trajs.size(); ++r)
    out.runs.push_back({r, base_seed + r, trajs[r].z.back(), trajs[r].terminal});
  return out;
}

inline std::vector<Trajectory> ensemble_trajectories(const SimConfig& cfg, std::size_t reps, std::uint64_t base_seed,
                                                     std::size_t workers) {
  if (reps == 0) throw InputError("ensemble: reps must be >= 1");
  std::vector<Trajectory> trajs(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    SimConfig c = cfg;
    c.seed = base_seed + r;
    trajs[r] = run(c).trajectory;
  });
  return trajs;
}

inline EnsembleSummary ensemble(const SimConfig& cfg, std::size_t reps, std::uint64_t base_seed,
                                std::size_t workers = default_workers()) {
  return summarize(ensemble_trajectories(cfg, reps, base_seed, workers), base_seed);
}

inline void write_summary_csv(const EnsembleSummary& s, std::ostream& out) {
  out << "t,mean_z,q10,q50,q90\n";
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    out << s.t[k] << ',' << csv::num(s.mean_z[k]) << ',' << csv::num(s.q10[k]) << ',' << csv::num(s.q50[k]) << ','
        << csv::num(s.q90[k]) << '\n';
  }
}

inline void write_terminal_csv(const EnsembleSummary& s, std::ostream& out) {
  out << "rep,seed,final_z,terminal_flag\n";
  for (const auto& r : s.runs) out << r.rep << ',' << r.seed << ',' << csv::num(r.final_z) << ',' << to_string(r.terminal) << '\n';
}

}  // namespace normdyn::engine
