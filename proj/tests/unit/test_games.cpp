#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "normdyn/games.hpp"
#include "normdyn/generators.hpp"

using namespace normdyn;
using namespace normdyn::games;

namespace {

Graph star_center(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.push_back({0, NodeId(i)});
  return Graph::from_edges(leaves + 1, e);
}

StateVector random_state(std::size_t n, Rng& rng) {
  StateVector x(n);
  for (auto& a : x) a = rng.bernoulli(0.5);
  return x;
}

}  // namespace

TEST(GeneralPayoffs, Examples) {
  const Graph g = star_center(4);
  const StateVector zeros(5, 0);
  const auto p = general_payoffs(g, zeros, 0, PayoffMatrix{1, 0, 0, 1});
  EXPECT_EQ(p.u0, 1.0);
  EXPECT_EQ(p.u1, 0.0);
  const auto k = general_payoffs(g, StateVector{0, 1, 0, 1, 1}, 0, PayoffMatrix{2.5, 2.5, 2.5, 2.5});
  EXPECT_DOUBLE_EQ(k.u0, 2.5);
  EXPECT_DOUBLE_EQ(k.u1, 2.5);
  const auto h = general_payoffs(g, StateVector{0, 0, 0, 1, 1}, 0, PayoffMatrix{2, 1, 1, 3});
  EXPECT_DOUBLE_EQ(h.u0, 1.5);
  EXPECT_DOUBLE_EQ(h.u1, 2.0);
  const Graph iso = Graph::from_edges(2, {});
  EXPECT_THROW(general_payoffs(iso, StateVector{0, 0}, 0, PayoffMatrix{}), PayoffUndefinedError);
}

TEST(CoordinationPayoffs, ThreeZeroTwoOneSplit) {
  const Graph g = star_center(5);
  const StateVector x{0, 0, 0, 0, 1, 1};
  for (double alpha : {0.0, 0.4, 0.5, 0.6, 2.0}) {
    const auto p = coordination_payoffs(g, x, 0, alpha);
    EXPECT_DOUBLE_EQ(p.u0, 3.0 / 5.0);
    EXPECT_DOUBLE_EQ(p.u1, (2.0 + 2.0 * alpha) / 5.0);
    EXPECT_EQ(best_response(p, 0) == 1, alpha > 0.5) << alpha;
  }
}

TEST(CoordinationPayoffs, Examples) {
  const Graph g = star_center(4);
  const auto all = coordination_payoffs(g, StateVector{0, 1, 1, 1, 1}, 0, 0.0);
  EXPECT_EQ(all.u0, 0.0);
  EXPECT_EQ(all.u1, 1.0);
  const auto half = coordination_payoffs(g, StateVector{0, 1, 1, 0, 0}, 0, 0.0);
  EXPECT_EQ(half.u0, 0.5);
  EXPECT_EQ(half.u1, 0.5);
  EXPECT_THROW(Coordination(-1.0), DomainError);
  EXPECT_THROW(coordination_payoffs(Graph::from_edges(1, {}), StateVector{0}, 0, 0.0), PayoffUndefinedError);
}

TEST(BestResponse, Ties) {
  EXPECT_EQ(best_response({0.6, 0.8}, 0), 1);
  EXPECT_EQ(best_response({0.5, 0.5}, 0), 0);
  EXPECT_EQ(best_response({0.5, 0.5}, 1), 1);
  EXPECT_EQ(best_response({0.9, 0.1}, 1), 0);
}

TEST(Reduce, Examples) {
  EXPECT_DOUBLE_EQ(reduce_to_coordination({1, 0, 0, 1.75}), 0.75);
  EXPECT_DOUBLE_EQ(reduce_to_coordination({2, 1, 1, 3}), 1.0);
  EXPECT_THROW(reduce_to_coordination({1, 0, 2, 1}), NotCoordinationError);
  EXPECT_THROW(reduce_to_coordination({2, 1, 1, 1}), NotCoordinationError);
}

TEST(Loglinear, ClosedForms) {
  EXPECT_EQ(loglinear_prob({0.3, 7.0}, 0.0), 0.5);
  EXPECT_EQ(loglinear_prob({0.3, 0.3}, 12.0), 0.5);
  EXPECT_NEAR(loglinear_prob({0.0, 1.0}, std::log(3.0)), 0.75, 1e-15);
  EXPECT_THROW(loglinear_prob({0, 1}, -1.0), DomainError);
}

TEST(Loglinear, StableForHugeBeta) {
  const double p = loglinear_prob({0.0, 1.0}, 1e6);
  EXPECT_EQ(p, 1.0);
  EXPECT_EQ(loglinear_prob({1.0, 0.0}, 1e6), 0.0);
  EXPECT_FALSE(std::isnan(loglinear_prob({500.0, 499.0}, 1e6)));
}

TEST(Loglinear, MonotoneInGapAndBeta) {
  double last = 0.0;
  for (double gap = -3.0; gap <= 3.0; gap += 0.25) {
    const double p = loglinear_prob({0.0, gap}, 2.0);
    EXPECT_GT(p, last);
    last = p;
  }
  last = 0.5;
  for (double beta = 0.5; beta < 50; beta *= 1.5) {
    const double p = loglinear_prob({0.2, 0.7}, beta);
    EXPECT_GE(p, last);
    last = p;
  }
}

TEST(Loglinear, EmpiricalFrequency) {
  Rng rng(10);
  for (double beta : {0.0, 0.5, 2.0}) {
    for (double gap : {-1.0, 0.0, 2.0}) {
      const double p = loglinear_prob({0.0, gap}, beta);
      int hits = 0;
      const int draws = 20000;
      for (int i = 0; i < draws; ++i) hits += rng.uniform() < p;
      EXPECT_NEAR(hits / double(draws), p, 3 * std::sqrt(p * (1 - p) / draws) + 1e-12);
    }
  }
}

TEST(Trend, Examples) {
  const StateVector a{0, 1, 0, 1};
  EXPECT_EQ(trend_signal(a, a, 0), 0.5);
  EXPECT_EQ(trend_signal(StateVector{0, 1, 1, 1}, StateVector{0, 0, 0, 0}, 0), 1.0);
  EXPECT_DOUBLE_EQ(trend_signal(StateVector{0, 1, 0, 0}, StateVector{0, 0, 0, 0}, 0), 2.0 / 3.0);
  EXPECT_EQ(trend_signal(StateVector{1, 0}, StateVector{}, 0), 0.5);
  EXPECT_THROW(trend_signal(StateVector{1}, StateVector{0}, 0), InputError);
  EXPECT_THROW(trend_signal(StateVector{1, 0}, StateVector{0}, 0), InputError);
  // Own change is excluded.
  EXPECT_EQ(trend_signal(StateVector{1, 0, 0}, StateVector{0, 0, 0}, 0), 0.5);
}

TEST(Trend, BoundsAndSign) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + rng.below(10);
    const auto now = random_state(n, rng), prev = random_state(n, rng);
    const std::size_t i = rng.below(n);
    const double v = trend_signal(now, prev, i);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    long long delta = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) delta += now[j] - prev[j];
    EXPECT_EQ(v > 0.5, delta > 0);
  }
}

TEST(Trend, NeighborsScope) {
  const Graph g = star_center(3);
  EXPECT_DOUBLE_EQ(trend_signal_neighbors(g, StateVector{0, 1, 0, 0}, StateVector{0, 0, 0, 0}, 0), 0.5 * (1 + 1.0 / 3));
  EXPECT_DOUBLE_EQ(trend_signal_neighbors(g, StateVector{1, 0, 0, 0}, StateVector{0, 0, 0, 0}, 1), 1.0);
}

TEST(Extended, Examples) {
  const Graph g = star_center(3);
  const StateVector x{1, 0, 0, 0};
  const auto trend_only = extended_payoffs(g, x, x, 0, ClassWeights{0, 0, 1, 1});
  EXPECT_EQ(trend_only.u0, 0.5);
  EXPECT_EQ(trend_only.u1, 0.5);
  const double third = 1.0 / 3.0;
  const ClassWeights w{third, third, 1.0 - 2 * third, 1};
  const auto p = extended_payoffs(g, x, x, 0, w);
  EXPECT_NEAR(p.u1, 0.5, 1e-15);
  EXPECT_NEAR(p.u0, 0.5, 1e-15);
}

TEST(Extended, ThirdsTieKeepsCurrent) {
  // With exactly representable weights (1/4, 1/4, 1/2) the analogous tie is exact.
  const Graph g = star_center(3);
  const StateVector x{1, 0, 0, 0};
  const auto p = extended_payoffs(g, x, x, 0, ClassWeights{0.25, 0.25, 0.5, 1});
  EXPECT_EQ(p.u0, 0.25 + 0.25);
  EXPECT_EQ(p.u1, 0.25 + 0.25);
  EXPECT_EQ(best_response(p, 1), 1);
}

TEST(Extended, ReducesToCoordination) {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng.below(15);
    const Graph g = generate(kind::ErdosRenyi{0.5}, n, rng.next());
    const auto now = random_state(n, rng), prev = random_state(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (g.degree(i) == 0) continue;
      const auto e = extended_payoffs(g, now, prev, i, ClassWeights{1, 0, 0, 1});
      const auto c = coordination_payoffs(g, now, i, 0.0);
      EXPECT_EQ(e.u0, c.u0);
      EXPECT_EQ(e.u1, c.u1);
    }
  }
}

TEST(Extended, WeightValidation) {
  EXPECT_THROW(ClassWeights({0.5, 0.5, 0.5, 1}).validate(), DomainError);
  EXPECT_THROW(ClassWeights({1.2, -0.2, 0, 1}).validate(), DomainError);
  EXPECT_THROW(ClassWeights({1, 0, 0, -1}).validate(), DomainError);
  EXPECT_NO_THROW(ClassWeights({0.1, 0.2, 0.7, 0}).validate());
  ExtendedParams p = ExtendedParams::single(3, {});
  p.class_of = {0, 1, 0};
  EXPECT_THROW(p.validate(3), InputError);
}

TEST(ThresholdEquivalence, BestResponseMatchesFraction) {
  Rng rng(4);
  const double special[] = {0.0, 0.5, 1.0, 2.0, -0.5};
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 2 + rng.below(12);
    const Graph g = generate(kind::ErdosRenyi{0.6}, n, rng.next());
    auto x = random_state(n, rng);
    const double alpha = trial % 2 ? special[rng.below(5)] : -0.99 + rng.uniform() * 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (g.degree(i) == 0) continue;
      x[i] = 0;
      std::size_t s = 0;
      for (NodeId j : g.neighbors(i)) s += x[j];
      const bool predicate = static_cast<double>(s) / static_cast<double>(g.degree(i)) > 1.0 / (2.0 + alpha);
      EXPECT_EQ(best_response(coordination_payoffs(g, x, i, alpha), 0) == 1, predicate);
    }
  }
}

TEST(ReductionEquivalence, SynchronousBestResponseTrajectories) {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng.below(15);
    const Graph g = generate(kind::ErdosRenyi{0.4}, n, rng.next());
    PayoffMatrix A;
    A.c = rng.uniform() * 2 - 1;
    A.a = A.c + 0.05 + rng.uniform() * 2;
    A.b = rng.uniform() * 2 - 1;
    A.d = A.b + 0.05 + rng.uniform() * 2;
    GameSpec general;
    general.payoff = A;
    general.rule = Rule::best_response;
    general.schedule = Schedule::synchronous;
    GameSpec reduced = general;
    reduced.payoff = Coordination{reduce_to_coordination(A)};
    const auto x0 = random_state(n, rng);
    Rng r1(1), r2(1);
    const auto a = run_game(g, x0, general, CommittedSet::none(n), 30, r1);
    const auto b = run_game(g, x0, reduced, CommittedSet::none(n), 30, r2);
    EXPECT_EQ(a.states, b.states);
    EXPECT_EQ(a.terminal, b.terminal);
  }
}

TEST(GameStep, ConsensusIsFixed) {
  const Graph g = generate(kind::RingLattice{4}, 10, 0);
  GameSpec spec;
  spec.rule = Rule::best_response;
  spec.schedule = Schedule::synchronous;
  Rng rng(1);
  for (Action a : {Action{0}, Action{1}}) {
    const StateVector x(10, a);
    EXPECT_EQ(game_step(g, x, {}, spec, CommittedSet::none(10), 1, rng), x);
  }
}

TEST(GameStep, CommittedKeepsAction) {
  const Graph g = star_center(4);
  auto committed = CommittedSet::of(5, std::vector<NodeId>{0});
  committed.action = 1;
  for (Rule rule : {Rule::best_response, Rule::loglinear}) {
    for (Schedule sch : {Schedule::synchronous, Schedule::async_uniform}) {
      GameSpec spec;
      spec.rule = rule;
      spec.schedule = sch;
      spec.beta = 50;
      Rng rng(2);
      const auto next = game_step(g, StateVector{0, 0, 0, 0, 0}, {}, spec, committed, 1, rng);
      EXPECT_EQ(next[0], 1);
    }
  }
}

TEST(GameStep, SynchronousTwoAgentOscillation) {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  GameSpec spec;
  spec.payoff = Coordination{1.0};
  spec.rule = Rule::best_response;
  spec.schedule = Schedule::synchronous;
  Rng rng(3);
  const auto traj = run_game(g, StateVector{0, 1}, spec, CommittedSet::none(2), 6, rng);
  for (std::size_t t = 0; t < traj.size(); ++t)
    EXPECT_EQ(traj.states[t], t % 2 == 0 ? (StateVector{0, 1}) : (StateVector{1, 0}));
  EXPECT_EQ(traj.terminal, Terminal::budget);
  EXPECT_EQ(traj.size(), 7u);
}

TEST(GameStep, IsolatedAgentsKeepState) {
  const Graph g = Graph::from_edges(3, {{0, 1}});
  GameSpec spec;
  spec.beta = 0;
  for (Schedule sch : {Schedule::synchronous, Schedule::async_uniform}) {
    spec.schedule = sch;
    Rng rng(4);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(game_step(g, StateVector{0, 1, 1}, {}, spec, CommittedSet::none(3), 1, rng)[2], 1);
  }
}

TEST(RunGame, BestResponseStopsAtFixedPoint) {
  const Graph g = generate(kind::Complete{}, 6, 0);
  GameSpec spec;
  spec.rule = Rule::best_response;
  spec.schedule = Schedule::synchronous;
  Rng rng(5);
  const auto traj = run_game(g, StateVector{1, 1, 1, 1, 0, 0}, spec, CommittedSet::none(6), 50, rng);
  EXPECT_EQ(traj.terminal, Terminal::fixed_point);
  EXPECT_EQ(traj.states.back(), StateVector(6, 1));
  EXPECT_EQ(traj.size(), 2u);
}

TEST(RunGame, ConsensusAbsorbingUnderBestResponse) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = generate(kind::WattsStrogatz{4, 0.2}, 20, rng.next());
    GameSpec spec;
    spec.payoff = Coordination{rng.uniform() * 3};
    spec.rule = Rule::best_response;
    spec.schedule = trial % 2 ? Schedule::synchronous : Schedule::async_uniform;
    for (Action a : {Action{0}, Action{1}}) {
      const auto traj = run_game(g, StateVector(20, a), spec, CommittedSet::none(20), 10, rng);
      EXPECT_EQ(traj.terminal, Terminal::fixed_point);
      EXPECT_EQ(traj.states.back(), StateVector(20, a));
    }
  }
}

TEST(RunGame, TimeVaryingBots) {
  const Graph g = generate(kind::Complete{}, 5, 0);
  auto bots = CommittedSet::of(5, std::vector<NodeId>{3, 4});
  bots.prior_action = 0;
  bots.action = 1;
  bots.switch_round = 3;
  GameSpec spec;
  spec.payoff = ExtendedParams::single(5, {0.6, 0.2, 0.2, 5});
  spec.schedule = Schedule::synchronous;
  Rng rng(7);
  const auto traj = run_game(g, StateVector(5, 1), spec, bots, 6, rng);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    EXPECT_EQ(traj.states[t][3], t < 3 ? 0 : 1);
    EXPECT_EQ(traj.states[t][4], t < 3 ? 0 : 1);
  }
  EXPECT_EQ(traj.pinned, (std::vector<Action>{0, 0, 0, 1, 1}));
}

TEST(RunGame, ZeroBetaIsFairCoin) {
  const Graph g = generate(kind::Complete{}, 50, 0);
  GameSpec spec;
  spec.beta = 0;
  spec.schedule = Schedule::synchronous;
  Rng rng(8);
  const auto traj = run_game(g, StateVector(50, 0), spec, CommittedSet::none(50), 400, rng);
  double mean = 0;
  for (std::size_t t = 1; t < traj.size(); ++t) mean += traj.z[t];
  mean /= static_cast<double>(traj.size() - 1);
  EXPECT_NEAR(mean, 0.5, 4 * std::sqrt(0.25 / (50.0 * 400.0)));
}

TEST(RunGame, Validation) {
  const Graph g = generate(kind::Complete{}, 3, 0);
  GameSpec spec;
  Rng rng(1);
  EXPECT_THROW(run_game(g, StateVector(2, 0), spec, CommittedSet::none(3), 5, rng), InputError);
  spec.beta = -1;
  EXPECT_THROW(run_game(g, StateVector(3, 0), spec, CommittedSet::none(3), 5, rng), DomainError);
}
