#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "normdyn/config.hpp"
#include "normdyn/csv.hpp"
#include "normdyn/engine.hpp"
#include "normdyn/error.hpp"
#include "normdyn/metrics.hpp"
#include "normdyn/parallel.hpp"

namespace normdyn::calibrate {

/// counts[i][w]: switches of agent i in rounds [w*window+1, (w+1)*window].
/// Values may be averages over several observed groups.
struct SwitchObservations {
  std::size_t window = 0;
  std::vector<std::vector<double>> counts;

  std::size_t agents() const { return counts.size(); }
  std::size_t windows() const { return counts.empty() ? 0 : counts.front().size(); }
  double total(std::size_t i) const { return std::accumulate(counts[i].begin(), counts[i].end(), 0.0); }

  void validate() const {
    if (window == 0) throw InputError("switch observations: window must be positive");
    for (const auto& row : counts) {
      if (row.size() != windows()) throw InputError("switch observations: ragged window count");
      for (double c : row)
        if (!(c >= 0.0 && c <= static_cast<double>(window)))
          throw InputError("switch observations: counts must lie in [0, window]");
    }
  }
};

/// Mean switch counts over a set of cadence-1 trajectories on the same population.
inline SwitchObservations observe_switches(const std::vector<Trajectory>& groups, std::size_t horizon, std::size_t window) {
  if (groups.empty()) throw InputError("observe_switches: no trajectories");
  SwitchObservations obs;
  obs.window = window;
  for (const auto& tr : groups) {
    const auto c = metrics::switch_counts(tr, horizon, window);
    if (obs.counts.empty()) obs.counts.assign(c.size(), std::vector<double>(c.front().size(), 0.0));
    if (c.size() != obs.agents()) throw InputError("observe_switches: population size differs between groups");
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t w = 0; w < c[i].size(); ++w) obs.counts[i][w] += c[i][w];
  }
  for (auto& row : obs.counts)
    for (double& v : row) v /= static_cast<double>(groups.size());
  return obs;
}

/// CSV "agent,window,switches"; cells not listed are zero.
inline SwitchObservations parse_observations(std::istream& in, std::size_t agents, std::size_t windows, std::size_t window) {
  const auto table = csv::parse(in);
  if (table.header != std::vector<std::string>{"agent", "window", "switches"})
    throw ParseError(1, "observations header must be 'agent,window,switches'");
  SwitchObservations obs;
  obs.window = window;
  obs.counts.assign(agents, std::vector<double>(windows, 0.0));
  std::vector<std::vector<bool>> seen(agents, std::vector<bool>(windows, false));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.row_lines[r];
    if (row.size() != 3) throw ParseError(line, "expected 3 fields");
    const double a = csv::to_double(row[0], line), w = csv::to_double(row[1], line), s = csv::to_double(row[2], line);
    if (!(a >= 0 && a < static_cast<double>(agents) && a == std::floor(a))) throw ParseError(line, "agent index out of range");
    if (!(w >= 0 && w < static_cast<double>(windows) && w == std::floor(w))) throw ParseError(line, "window index out of range");
    if (!(s >= 0 && s <= static_cast<double>(window))) throw ParseError(line, "switch count must lie in [0, window]");
    const auto ai = static_cast<std::size_t>(a), wi = static_cast<std::size_t>(w);
    if (seen[ai][wi]) throw ParseError(line, "duplicate agent/window cell");
    seen[ai][wi] = true;
    obs.counts[ai][wi] = s;
  }
  return obs;
}

inline void write_observations(const SwitchObservations& obs, std::ostream& out) {
  out << "agent,window,switches\n";
  for (std::size_t i = 0; i < obs.agents(); ++i)
    for (std::size_t w = 0; w < obs.windows(); ++w) out << i << ',' << w << ',' << csv::num(obs.counts[i][w]) << '\n';
}

/// Points of {b + k + r = 1} with spacing `step`, b descending, then k descending.
inline std::vector<games::ClassWeights> simplex_grid(double step, double beta = 1.0) {
  if (!(step > 0.0 && step <= 0.5)) throw InputError("grid_step must lie in (0, 0.5]");
  const double inv = 1.0 / step;
  const auto L = static_cast<long>(std::llround(inv));
  if (std::fabs(inv - static_cast<double>(L)) > 1e-9) throw InputError("grid_step must divide 1 evenly");
  std::vector<games::ClassWeights> out;
  for (long i = L; i >= 0; --i)
    for (long j = L - i; j >= 0; --j) {
      games::ClassWeights w;
      w.b = static_cast<double>(i) / static_cast<double>(L);
      w.k = static_cast<double>(j) / static_cast<double>(L);
      w.r = static_cast<double>(L - i - j) / static_cast<double>(L);
      w.beta = beta;
      out.push_back(w);
    }
  return out;
}

enum class Norm { mae, l2 };

struct GridOptions {
  double grid_step = 0.1;
  std::size_t classes = 1;
  std::size_t reps = 50;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  Norm norm = Norm::mae;
};

struct GridRow {
  std::size_t candidate = 0;
  std::size_t cls = 0;
  games::ClassWeights weights;
  double objective = 0.0;
};

struct CalibrationReport {
  std::vector<games::ClassWeights> best;  // one per class
  double objective = 0.0;
  std::size_t best_candidate = 0;
  std::vector<std::uint32_t> assignment;  // class of each agent
  std::vector<GridRow> table;             // one row per (candidate, class)
};

namespace detail {

// Top half of free agents by observed switches (ties by index) form class 0.
inline std::vector<std::uint32_t> assign_classes(const SwitchObservations& obs, const std::vector<Action>& pinned,
                                                 std::size_t classes) {
  std::vector<std::uint32_t> cls(obs.agents(), 0);
  if (classes == 1) return cls;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < obs.agents(); ++i)
    if (pinned.empty() || !pinned[i]) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return obs.total(a) > obs.total(b); });
  const std::size_t top = (order.size() + 1) / 2;
  for (std::size_t r = top; r < order.size(); ++r) cls[order[r]] = 1;
  return cls;
}

// totals[c][w] summed over free agents of class c.
inline std::vector<std::vector<double>> class_totals(const std::vector<std::vector<double>>& counts,
                                                     const std::vector<std::uint32_t>& cls, const std::vector<Action>& pinned,
                                                     std::size_t classes) {
  const std::size_t windows = counts.empty() ? 0 : counts.front().size();
  std::vector<std::vector<double>> totals(classes, std::vector<double>(windows, 0.0));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!pinned.empty() && pinned[i]) continue;
    for (std::size_t w = 0; w < windows; ++w) totals[cls[i]][w] += counts[i][w];
  }
  return totals;
}

inline std::vector<Action> committed_mask(const SimConfig& scenario, std::size_t n) {
  Rng root(scenario.seed);
  Rng draw = root.split(engine::committed_draw);
  return engine::committed_for(scenario.game.committed, n, draw).mask;
}

}  // namespace detail

/// Grid search over extended-model weights. Every candidate is scored on the
/// same seed schedule (base_seed .. base_seed+reps-1). Committed agents are
/// excluded from class assignment and from the objective.
inline CalibrationReport grid_search_bkr(const SwitchObservations& observed, const SimConfig& scenario,
                                         const GridOptions& opt) {
  if (scenario.model != Model::game) throw InputError("grid_search_bkr: scenario must be a game model");
  if (opt.classes != 1 && opt.classes != 2) throw InputError("grid_search_bkr: classes must be 1 or 2");
  if (opt.reps == 0) throw InputError("grid_search_bkr: reps must be >= 1");
  if (scenario.cadence != 1) throw InputError("grid_search_bkr: scenario cadence must be 1");
  if (scenario.game.committed.fraction) throw InputError("grid_search_bkr: committed agents must be listed explicitly");
  observed.validate();
  if (observed.windows() * observed.window != scenario.horizon)
    throw InputError("grid_search_bkr: observation windows must span the scenario horizon");

  const auto graph = engine::resolve_graph(scenario).graph;
  const std::size_t n = graph.node_count();
  if (observed.agents() != n) throw InputError("grid_search_bkr: observations cover a different population size");
  const auto pinned = detail::committed_mask(scenario, n);

  std::vector<double> betas(opt.classes, scenario.game.beta);
  for (std::size_t c = 0; c < opt.classes && c < scenario.game.classes.size(); ++c)
    betas[c] = scenario.game.classes[c].weights.beta;
  std::vector<std::vector<games::ClassWeights>> per_class;
  for (std::size_t c = 0; c < opt.classes; ++c) per_class.push_back(simplex_grid(opt.grid_step, betas[c]));
  const std::size_t per = per_class.front().size();
  const std::size_t candidates = opt.classes == 1 ? per : per * per;
  if (candidates == 0) throw InputError("grid_search_bkr: empty grid");

  CalibrationReport report;
  report.assignment = detail::assign_classes(observed, pinned, opt.classes);
  const auto target = detail::class_totals(observed.counts, report.assignment, pinned, opt.classes);

  auto weights_of = [&](std::size_t cand) {
    std::vector<games::ClassWeights> w;
    if (opt.classes == 1) w.push_back(per_class[0][cand]);
    else w = {per_class[0][cand / per], per_class[1][cand % per]};
    return w;
  };

  std::vector<double> objective(candidates);
  parallel_for(candidates, opt.workers, [&](std::size_t cand) {
    SimConfig cfg = scenario;
    cfg.game.form = GameSection::PayoffForm::extended;
    cfg.game.classes.clear();
    for (const auto& w : weights_of(cand)) cfg.game.classes.push_back({w, 1.0});
    cfg.game.assignment = report.assignment;
    std::vector<std::vector<double>> sim(opt.classes, std::vector<double>(observed.windows(), 0.0));
    for (std::size_t r = 0; r < opt.reps; ++r) {
      cfg.seed = opt.base_seed + r;
      const auto traj = engine::run(cfg).trajectory;
      const auto counts = metrics::switch_counts(traj, scenario.horizon, observed.window);
      const auto totals = detail::class_totals(counts, report.assignment, pinned, opt.classes);
      for (std::size_t c = 0; c < opt.classes; ++c)
        for (std::size_t w = 0; w < observed.windows(); ++w) sim[c][w] += totals[c][w];
    }
    double acc = 0.0;
    std::size_t cells = 0;
    for (std::size_t c = 0; c < opt.classes; ++c)
      for (std::size_t w = 0; w < observed.windows(); ++w, ++cells) {
        const double diff = sim[c][w] / static_cast<double>(opt.reps) - target[c][w];
        acc += opt.norm == Norm::mae ? std::fabs(diff) : diff * diff;
      }
    objective[cand] = cells == 0 ? 0.0 : acc / static_cast<double>(cells);
  });

  // Enumeration order already puts larger b (class 0 first) ahead, so the
  // first strict minimum is the documented tie-break.
  std::size_t best = 0;
  for (std::size_t cand = 1; cand < candidates; ++cand)
    if (objective[cand] < objective[best]) best = cand;
  report.best_candidate = best;
  report.best = weights_of(best);
  report.objective = objective[best];
  for (std::size_t cand = 0; cand < candidates; ++cand) {
    const auto w = weights_of(cand);
    for (std::size_t c = 0; c < w.size(); ++c) report.table.push_back({cand, c, w[c], objective[cand]});
  }
  return report;
}

inline void write_grid_csv(const CalibrationReport& report, std::ostream& out) {
  out << "class,b,k,r,objective\n";
  for (const auto& row : report.table)
    out << row.cls << ',' << csv::num(row.weights.b) << ',' << csv::num(row.weights.k) << ',' << csv::num(row.weights.r) << ','
        << csv::num(row.objective) << '\n';
}

enum class SweepModel { naming_game, game_extended, game_loglinear };

struct TippingPoint {
  double fraction = 0.0;
  double mean_uptake = 0.0;
  double std_uptake = 0.0;  // sample standard deviation; 0 for a single rep
  std::size_t reps = 0;
};

struct TippingResult {
  std::vector<TippingPoint> points;
  double threshold = 0.5;
  std::optional<double> critical_mass;  // empty = above sweep range
  // Smallest fractions whose 95% normal band reaches / clears the threshold.
  std::optional<double> band_low, band_high;
};

struct SweepOptions {
  std::size_t reps = 20;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  double threshold = 0.5;
};

/// Terminal uptake of the committed alternative among non-committed agents,
/// per committed fraction. Fractions share the seed schedule.
inline TippingResult critical_mass_sweep(SweepModel model, const std::vector<double>& fractions, const SimConfig& scenario,
                                         const SweepOptions& opt) {
  if (fractions.empty()) throw InputError("critical_mass_sweep: no fractions");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] >= 0.0 && fractions[i] <= 1.0)) throw InputError("critical_mass_sweep: fractions must lie in [0,1]");
    if (i > 0 && !(fractions[i] > fractions[i - 1])) throw InputError("critical_mass_sweep: fractions must be strictly increasing");
  }
  if (opt.reps == 0) throw InputError("critical_mass_sweep: reps must be >= 1");
  switch (model) {
    case SweepModel::naming_game:
      if (scenario.model != Model::naming_game) throw InputError("critical_mass_sweep: scenario must be a naming_game model");
      break;
    case SweepModel::game_extended:
      if (scenario.model != Model::game || scenario.game.form != GameSection::PayoffForm::extended)
        throw InputError("critical_mass_sweep: scenario must be an extended game");
      break;
    case SweepModel::game_loglinear:
      if (scenario.model != Model::game || scenario.game.rule != games::Rule::loglinear ||
          scenario.game.form == GameSection::PayoffForm::extended)
        throw InputError("critical_mass_sweep: scenario must be a log-linear coordination game");
      break;
  }

  std::vector<double> uptake(fractions.size() * opt.reps);
  parallel_for(uptake.size(), opt.workers, [&](std::size_t job) {
    SimConfig cfg = scenario;
    const double f = fractions[job / opt.reps];
    if (model == SweepModel::naming_game) {
      cfg.naming_game.committed_fraction = f;
    } else {
      cfg.game.committed.agents.clear();
      cfg.game.committed.fraction = f;
      cfg.game.committed.action = 1;
      cfg.game.committed.switch_round.reset();
    }
    cfg.seed = opt.base_seed + job % opt.reps;
    uptake[job] = engine::terminal_uptake(engine::run(cfg).trajectory);
  });

  TippingResult out;
  out.threshold = opt.threshold;
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    const std::span<const double> u(uptake.data() + k * opt.reps, opt.reps);
    TippingPoint p;
    p.fraction = fractions[k];
    p.reps = opt.reps;
    p.mean_uptake = engine::mean(u);
    if (opt.reps > 1) {
      double ss = 0.0;
      for (double v : u) ss += (v - p.mean_uptake) * (v - p.mean_uptake);
      p.std_uptake = std::sqrt(ss / static_cast<double>(opt.reps - 1));
    }
    const double half = 1.959963984540054 * p.std_uptake / std::sqrt(static_cast<double>(opt.reps));
    if (!out.critical_mass && p.mean_uptake >= opt.threshold) out.critical_mass = p.fraction;
    if (!out.band_low && p.mean_uptake + half >= opt.threshold) out.band_low = p.fraction;
    if (!out.band_high && p.mean_uptake - half >= opt.threshold) out.band_high = p.fraction;
    out.points.push_back(p);
  }
  return out;
}

inline void write_tipping_csv(const TippingResult& r, std::ostream& out) {
  out << "fraction,mean_uptake,std_uptake,reps\n";
  for (const auto& p : r.points)
    out << csv::num(p.fraction) << ',' << csv::num(p.mean_uptake) << ',' << csv::num(p.std_uptake) << ',' << p.reps << '\n';
}

}  // namespace normdyn::calibrate
