#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "normdyn/committed.hpp"
#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/random.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn::cultures {

/// Word inventories: for every agent and object, the words currently held.
/// Words keep insertion order so uniform draws are reproducible.
class Inventory {
 public:
  // Invented words are `ns | counter`; ns is derived from the run seed so
  // tokens from different runs do not collide when logged together.
  Inventory(std::size_t agents, std::size_t objects, std::uint64_t seed = 0)
      : agents_(agents), objects_(objects), cells_(agents * objects),
        namespace_((splitmix64(seed) & 0x7FFFFFFF00000000ULL) | 0x8000000000000000ULL) {
    if (objects == 0) throw InputError("naming game: need at least one object");
  }

  std::size_t agents() const noexcept { return agents_; }
  std::size_t objects() const noexcept { return objects_; }

  const std::vector<Word>& words(std::size_t agent, std::size_t object) const { return cells_[agent * objects_ + object]; }
  std::vector<Word>& words(std::size_t agent, std::size_t object) { return cells_[agent * objects_ + object]; }

  bool holds(std::size_t agent, std::size_t object, Word w) const {
    const auto& ws = words(agent, object);
    return std::find(ws.begin(), ws.end(), w) != ws.end();
  }

  void collapse(std::size_t agent, std::size_t object, Word w) { words(agent, object).assign(1, w); }

  void add(std::size_t agent, std::size_t object, Word w) {
    if (!holds(agent, object, w)) words(agent, object).push_back(w);
  }

  Word invent() { return namespace_ | next_++; }

  // Every agent holds exactly {w} for the object.
  bool agrees_on(std::size_t object, Word w) const {
    for (std::size_t a = 0; a < agents_; ++a) {
      const auto& ws = words(a, object);
      if (ws.size() != 1 || ws.front() != w) return false;
    }
    return true;
  }

  // Global consensus: for each object, all agents hold the same single word.
  bool consensus() const {
    if (agents_ == 0) return true;
    for (std::size_t o = 0; o < objects_; ++o) {
      const auto& first = words(0, o);
      if (first.size() != 1 || !agrees_on(o, first.front())) return false;
    }
    return true;
  }

  bool operator==(const Inventory&) const = default;

 private:
  std::size_t agents_;
  std::size_t objects_;
  std::vector<std::vector<Word>> cells_;
  std::uint64_t namespace_;
  std::uint64_t next_ = 0;
};

struct Interaction {
  std::size_t speaker = 0;
  std::size_t listener = 0;
  std::size_t object = 0;
  Word word = 0;
  bool success = false;
  bool happened = false;  // false when the drawn agent had no neighbors
};

/// One Naming Game interaction. A uniform agent and a uniform neighbor form
/// the pair; a fair coin decides who speaks. The speaker names a uniform
/// object with a uniform word from its set (inventing and storing one when the
/// set is empty); committed speakers always use their committed word.
/// On success both sets collapse to the word, otherwise the listener adds it.
/// Committed agents never change their inventory.
inline Interaction naming_game_step(const Graph& g, Inventory& inv, const CommittedSet& committed, Rng& rng) {
  const std::size_t n = g.node_count();
  if (inv.agents() != n) throw InputError("naming_game_step: dimension mismatch");
  Interaction it;
  const auto a = static_cast<std::size_t>(rng.below(n));
  const auto nb = g.neighbors(a);
  if (nb.empty()) return it;
  const std::size_t b = nb[rng.below(nb.size())];
  const bool a_speaks = (rng.next() >> 63) == 0;
  it.speaker = a_speaks ? a : b;
  it.listener = a_speaks ? b : a;
  it.object = static_cast<std::size_t>(rng.below(inv.objects()));
  it.happened = true;

  if (committed.contains(it.speaker)) {
    it.word = committed.word;
  } else {
    auto& own = inv.words(it.speaker, it.object);
    if (own.empty()) {
      it.word = inv.invent();
      own.push_back(it.word);
    } else {
      it.word = own[rng.below(own.size())];
    }
  }

  const bool listener_committed = committed.contains(it.listener);
  if (inv.holds(it.listener, it.object, it.word)) {
    it.success = true;
    if (!committed.contains(it.speaker)) inv.collapse(it.speaker, it.object, it.word);
    if (!listener_committed) inv.collapse(it.listener, it.object, it.word);
  } else if (!listener_committed) {
    inv.add(it.listener, it.object, it.word);
  }
  return it;
}

struct NamingGameOptions {
  std::size_t objects = 1;
  double committed_fraction = 0.0;
  Word committed_word = 0;
  // Run without committed agents until consensus (the status quo) before injecting them.
  bool pre_consensus = true;
  std::size_t pre_consensus_rounds = 100000;
  std::size_t max_rounds = 1000;
};

struct NamingGameRun {
  Trajectory uptake;  // z = uptake per round; t counts rounds of n interactions
  std::vector<Action> consensus_flags;
  bool consensus = false;
  std::optional<Word> consensus_word;
  std::optional<Word> status_quo;
  bool pre_consensus_reached = false;
  CommittedSet committed;
  Inventory final_inventory{0, 1};
};

/// Share of non-committed agents whose every object set is exactly {word}.
/// With no non-committed agents the share is vacuously 1.
inline double uptake(const Inventory& inv, const CommittedSet& committed, Word word) {
  std::size_t free = 0, adopted = 0;
  for (std::size_t a = 0; a < inv.agents(); ++a) {
    if (committed.contains(a)) continue;
    ++free;
    bool all = true;
    for (std::size_t o = 0; o < inv.objects() && all; ++o) {
      const auto& ws = inv.words(a, o);
      all = ws.size() == 1 && ws.front() == word;
    }
    adopted += all;
  }
  return free == 0 ? 1.0 : static_cast<double>(adopted) / static_cast<double>(free);
}

inline NamingGameRun run_naming_game(const Graph& g, const NamingGameOptions& opt, Rng& rng) {
  const std::size_t n = g.node_count();
  if (!(opt.committed_fraction >= 0.0 && opt.committed_fraction <= 1.0)) {
    throw InputError("run_naming_game: committed fraction must lie in [0,1]");
  }
  NamingGameRun run;
  Inventory inv(n, opt.objects, rng.seed());
  const std::size_t round = std::max<std::size_t>(1, n);

  if (opt.pre_consensus && n > 0) {
    const auto none = CommittedSet::none(n);
    for (std::size_t step = 0; step < opt.pre_consensus_rounds * round; ++step) {
      const auto it = naming_game_step(g, inv, none, rng);
      if (it.success && inv.consensus()) {
        run.pre_consensus_reached = true;
        break;
      }
    }
    if (run.pre_consensus_reached) run.status_quo = inv.words(0, 0).front();
  }

  run.committed = CommittedSet::random_fraction(n, opt.committed_fraction, rng);
  run.committed.word = opt.committed_word;
  for (std::size_t a = 0; a < n; ++a) {
    if (!run.committed.contains(a)) continue;
    for (std::size_t o = 0; o < opt.objects; ++o) inv.collapse(a, o, opt.committed_word);
  }

  run.uptake.n = n;
  run.uptake.pinned = run.committed.mask;
  auto record = [&](std::size_t t) {
    run.uptake.record_value(t, uptake(inv, run.committed, opt.committed_word));
    run.consensus_flags.push_back(run.consensus);
  };
  run.consensus = inv.consensus();
  record(0);

  std::size_t steps = 0;
  const std::size_t budget = opt.max_rounds * round;
  while (!run.consensus && steps < budget) {
    const auto it = naming_game_step(g, inv, run.committed, rng);
    ++steps;
    if (it.success && inv.consensus()) run.consensus = true;
    if (steps % round == 0 || run.consensus) record((steps + round - 1) / round);
  }
  if (run.consensus && n > 0) run.consensus_word = inv.words(0, 0).front();
  run.uptake.terminal = run.consensus ? Terminal::consensus : Terminal::budget;
  run.final_inventory = std::move(inv);
  return run;
}

}  // namespace normdyn::cultures
