#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "normdyn/committed.hpp"
#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/random.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn::games {

// Row = own action, column = opponent action:
//   own 0: a vs 0, b vs 1;  own 1: c vs 0, d vs 1.
struct PayoffMatrix {
  double a = 1, b = 0, c = 0, d = 1;
};

// Matrix [[1, 0], [0, 1 + alpha]].
struct Coordination {
  double alpha = 0.0;

  explicit Coordination(double a = 0.0) : alpha(a) {
    if (!(a > -1.0)) throw DomainError("coordination: alpha must exceed -1");
  }
};

// Coordination, inertia and trend weights of one class of agents.
struct ClassWeights {
  double b = 1.0;
  double k = 0.0;
  double r = 0.0;
  double beta = 1.0;

  void validate() const {
    if (!(b >= 0 && k >= 0 && r >= 0)) throw DomainError("extended payoff: weights must be non-negative");
    if (!(std::fabs(b + k + r - 1.0) <= 1e-12)) throw DomainError("extended payoff: b + k + r must equal 1");
    if (!(beta >= 0)) throw DomainError("extended payoff: beta must be non-negative");
  }
};

struct ExtendedParams {
  std::vector<ClassWeights> classes;
  std::vector<std::uint32_t> class_of;  // per agent

  static ExtendedParams single(std::size_t n, ClassWeights w) {
    w.validate();
    return {{w}, std::vector<std::uint32_t>(n, 0)};
  }

  void validate(std::size_t n) const {
    if (classes.empty()) throw DomainError("extended payoff: no classes");
    for (const auto& w : classes) w.validate();
    if (class_of.size() != n) throw InputError("extended payoff: class assignment has wrong length");
    for (auto c : class_of)
      if (c >= classes.size()) throw InputError("extended payoff: class index out of range");
  }

  const ClassWeights& of(std::size_t i) const { return classes[class_of[i]]; }
};

using PayoffSpec = std::variant<PayoffMatrix, Coordination, ExtendedParams>;

struct Payoffs {
  double u0 = 0.0;  // payoff of action 0
  double u1 = 0.0;  // payoff of action 1
};

namespace detail {
inline std::size_t active_neighbors(const Graph& g, std::span<const Action> x, std::size_t i) {
  std::size_t s = 0;
  for (NodeId j : g.neighbors(i)) s += x[j];
  return s;
}

inline std::size_t checked_degree(const Graph& g, std::size_t i) {
  const std::size_t d = g.degree(i);
  if (d == 0) throw PayoffUndefinedError("payoff undefined for isolated agent " + std::to_string(i));
  return d;
}
}  // namespace detail

/// Average payoff against each neighbor under matrix A.
inline Payoffs general_payoffs(const Graph& g, std::span<const Action> x, std::size_t i, const PayoffMatrix& A) {
  const auto d = static_cast<double>(detail::checked_degree(g, i));
  const auto s = static_cast<double>(detail::active_neighbors(g, x, i));
  return {(A.a * (d - s) + A.b * s) / d, (A.c * (d - s) + A.d * s) / d};
}

inline Payoffs coordination_payoffs(const Graph& g, std::span<const Action> x, std::size_t i, double alpha) {
  const auto d = static_cast<double>(detail::checked_degree(g, i));
  const auto s = static_cast<double>(detail::active_neighbors(g, x, i));
  return {(d - s) / d, ((1.0 + alpha) * s) / d};
}

// Exact ties keep the current action.
inline Action best_response(const Payoffs& p, Action current) {
  if (p.u1 > p.u0) return 1;
  if (p.u0 > p.u1) return 0;
  return current;
}

inline double reduce_to_coordination(const PayoffMatrix& A) {
  if (!(A.a > A.c) || !(A.d > A.b)) throw NotCoordinationError("matrix is not a coordination game (need a > c and d > b)");
  return (A.d - A.b) / (A.a - A.c) - 1.0;
}

/// Probability of choosing action 1 under log-linear learning with rationality beta.
inline double loglinear_prob(const Payoffs& p, double beta) {
  if (!(beta >= 0.0)) throw DomainError("loglinear: beta must be non-negative");
  const double e1 = beta * p.u1;
  const double e0 = beta * p.u0;
  const double top = std::max(e0, e1);
  const double w1 = std::exp(e1 - top);
  const double w0 = std::exp(e0 - top);
  return w1 / (w0 + w1);
}

enum class TrendScope { population, neighbors };

/// Trend estimate: 1/2 plus half the mean change of the other agents'
/// actions over the last round. Empty `previous` means no history (1/2).
inline double trend_signal(std::span<const Action> now, std::span<const Action> previous, std::size_t i) {
  if (now.size() < 2) throw InputError("trend_signal: need at least two agents");
  if (previous.empty()) return 0.5;
  if (previous.size() != now.size()) throw InputError("trend_signal: length mismatch");
  long long delta = 0;
  for (std::size_t j = 0; j < now.size(); ++j)
    if (j != i) delta += static_cast<long long>(now[j]) - static_cast<long long>(previous[j]);
  return 0.5 * (1.0 + static_cast<double>(delta) / static_cast<double>(now.size() - 1));
}

// Variant restricted to the agent's neighbors.
inline double trend_signal_neighbors(const Graph& g, std::span<const Action> now, std::span<const Action> previous,
                                     std::size_t i) {
  if (previous.empty()) return 0.5;
  const auto d = detail::checked_degree(g, i);
  long long delta = 0;
  for (NodeId j : g.neighbors(i)) delta += static_cast<long long>(now[j]) - static_cast<long long>(previous[j]);
  return 0.5 * (1.0 + static_cast<double>(delta) / static_cast<double>(d));
}

/// Coordination (b), inertia (k) and trend (r) payoffs. `x` is the state the
/// agent reacts to; the trend compares `trend_now` with `trend_prev`.
inline Payoffs extended_payoffs(const Graph& g, std::span<const Action> x, std::span<const Action> trend_now,
                                std::span<const Action> trend_prev, std::size_t i, const ClassWeights& w,
                                TrendScope scope = TrendScope::population) {
  const auto d = static_cast<double>(detail::checked_degree(g, i));
  const auto s = static_cast<double>(detail::active_neighbors(g, x, i));
  const double trend = scope == TrendScope::population ? trend_signal(trend_now, trend_prev, i)
                                                       : trend_signal_neighbors(g, trend_now, trend_prev, i);
  const double own = x[i];
  return {w.b * ((d - s) / d) + w.k * (1.0 - own) + w.r * (1.0 - trend), w.b * (s / d) + w.k * own + w.r * trend};
}

inline Payoffs extended_payoffs(const Graph& g, std::span<const Action> now, std::span<const Action> previous,
                                std::size_t i, const ClassWeights& w, TrendScope scope = TrendScope::population) {
  return extended_payoffs(g, now, now, previous, i, w, scope);
}

enum class Rule { best_response, loglinear };
enum class Schedule { synchronous, async_uniform };

struct GameSpec {
  PayoffSpec payoff = Coordination{0.0};
  Rule rule = Rule::loglinear;
  double beta = 1.0;  // rationality for matrix and coordination payoffs
  Schedule schedule = Schedule::async_uniform;
  TrendScope trend_scope = TrendScope::population;
};

namespace detail {

inline Payoffs payoffs_for(const Graph& g, std::span<const Action> live, std::span<const Action> now,
                           std::span<const Action> previous, std::size_t i, const GameSpec& spec) {
  return std::visit(
      [&](const auto& p) -> Payoffs {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PayoffMatrix>) return general_payoffs(g, live, i, p);
        else if constexpr (std::is_same_v<P, Coordination>) return coordination_payoffs(g, live, i, p.alpha);
        else return extended_payoffs(g, live, now, previous, i, p.of(i), spec.trend_scope);
      },
      spec.payoff);
}

inline double beta_for(std::size_t i, const GameSpec& spec) {
  if (const auto* ext = std::get_if<ExtendedParams>(&spec.payoff)) return ext->of(i).beta;
  return spec.beta;
}

inline Action decide(const Graph& g, std::span<const Action> live, std::span<const Action> now,
                     std::span<const Action> previous, std::size_t i, const GameSpec& spec, Rng& rng) {
  const Payoffs p = payoffs_for(g, live, now, previous, i, spec);
  if (spec.rule == Rule::best_response) return best_response(p, live[i]);
  return rng.uniform() < loglinear_prob(p, beta_for(i, spec)) ? 1 : 0;
}

}  // namespace detail

inline void validate(const GameSpec& spec, std::size_t n) {
  if (const auto* ext = std::get_if<ExtendedParams>(&spec.payoff)) ext->validate(n);
  if (!(spec.beta >= 0.0)) throw DomainError("game: beta must be non-negative");
}

/// Produces the state of round `round` from the state of round-1 (`now`) and
/// round-2 (`previous`, empty when there is none).
///
/// Synchronous: every free agent decides against `now`.
/// Asynchronous: n uniform activations against the live state; the trend term
/// still compares the two round snapshots. Committed agents play their
/// scheduled action; isolated agents keep their state.
inline StateVector game_step(const Graph& g, std::span<const Action> now, std::span<const Action> previous,
                             const GameSpec& spec, const CommittedSet& committed, std::size_t round, Rng& rng) {
  const std::size_t n = g.node_count();
  if (now.size() != n) throw InputError("game_step: dimension mismatch");
  StateVector next(now.begin(), now.end());
  if (spec.schedule == Schedule::synchronous) {
    for (std::size_t i = 0; i < n; ++i) {
      if (committed.contains(i)) next[i] = committed.action_at(round);
      else if (g.degree(i) > 0) next[i] = detail::decide(g, now, now, previous, i, spec, rng);
    }
    return next;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (committed.contains(i)) next[i] = committed.action_at(round);
  for (std::size_t a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    if (committed.contains(i) || g.degree(i) == 0) continue;
    next[i] = detail::decide(g, next, now, previous, i, spec, rng);
  }
  return next;
}

// No free agent strictly prefers to switch under best response, with a flat trend.
inline bool best_response_stable(const Graph& g, std::span<const Action> x, const GameSpec& spec,
                                 const CommittedSet& committed) {
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (committed.contains(i) || g.degree(i) == 0) continue;
    if (best_response(detail::payoffs_for(g, x, x, x, i, spec), x[i]) != x[i]) return false;
  }
  return true;
}

/// Runs `rounds` rounds from `initial` (committed agents overwritten with
/// their round-0 action). Best-response runs stop at a fixed point.
inline Trajectory run_game(const Graph& g, StateVector initial, const GameSpec& spec, const CommittedSet& committed,
                           std::size_t rounds, Rng& rng) {
  const std::size_t n = g.node_count();
  if (initial.size() != n) throw InputError("run_game: initial state has wrong length");
  validate(spec, n);
  const bool has_memory = std::holds_alternative<ExtendedParams>(spec.payoff);

  Trajectory traj;
  traj.n = n;
  traj.pinned = committed.mask.empty() ? std::vector<Action>(n, 0) : committed.mask;
  for (std::size_t i = 0; i < n; ++i)
    if (committed.contains(i)) initial[i] = committed.action_at(0);
  StateVector previous;
  StateVector now = std::move(initial);
  traj.record(0, now);
  traj.terminal = Terminal::budget;

  for (std::size_t t = 1; t <= rounds; ++t) {
    StateVector next = game_step(g, now, previous, spec, committed, t, rng);
    const bool no_pending_switch = !committed.switch_round || t >= *committed.switch_round;
    const bool settled = next == now && (!has_memory || previous == now);
    if (spec.rule == Rule::best_response && settled && no_pending_switch &&
        (spec.schedule == Schedule::synchronous || best_response_stable(g, now, spec, committed))) {
      traj.terminal = Terminal::fixed_point;
      break;
    }
    previous = std::move(now);
    now = std::move(next);
    traj.record(t, now);
  }
  return traj;
}

}  // namespace normdyn::games
