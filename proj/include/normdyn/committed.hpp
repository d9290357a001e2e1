#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/random.hpp"
#include "normdyn/trajectory.hpp"

namespace normdyn {

using Word = std::uint64_t;

/// Agents that never change state in response to peers.
///
/// For the Naming Game they always name `word`; for binary games they play
/// `action`, except that when `switch_round` is set they play `prior_action`
/// for all rounds before it (bots that first hold the status quo, then flip).
struct CommittedSet {
  std::vector<Action> mask;
  Word word = 0;
  Action action = 1;
  Action prior_action = 0;
  std::optional<std::size_t> switch_round;

  static CommittedSet none(std::size_t n) {
    CommittedSet c;
    c.mask.assign(n, 0);
    return c;
  }

  static CommittedSet of(std::size_t n, std::span<const NodeId> agents) {
    CommittedSet c = none(n);
    for (NodeId a : agents) {
      if (a >= n) throw InputError("committed agent " + std::to_string(a) + " out of range");
      c.mask[a] = 1;
    }
    return c;
  }

  // round(fraction * n) agents drawn uniformly without replacement.
  static CommittedSet random_fraction(std::size_t n, double fraction, Rng& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw InputError("committed fraction must lie in [0,1]");
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(ids[i], ids[j]);
    }
    return of(n, std::span<const NodeId>(ids.data(), count));
  }

  bool contains(std::size_t i) const { return !mask.empty() && mask[i]; }

  std::size_t count() const {
    std::size_t c = 0;
    for (Action a : mask) c += a;
    return c;
  }

  Action action_at(std::size_t round) const {
    return switch_round && round < *switch_round ? prior_action : action;
  }
};

}  // namespace normdyn
