// Greedy seeding of a threshold cascade on a small-world network.
#include <cstdio>

#include "normdyn/cascade.hpp"
#include "normdyn/generators.hpp"

int main() {
  using namespace normdyn;
  const Graph g = generate(kind::WattsStrogatz{4, 0.1}, 60, 42);
  const auto theta = cascade::ThresholdProfile::uniform(g.node_count(), 0.4);
  for (std::size_t k = 0; k <= 4; ++k) {
    const auto sel = cascade::greedy_seed_selection(g, theta, k);
    std::printf("k=%zu spread=%.3f seeds:", k, sel.spread);
    for (NodeId s : sel.seeds) std::printf(" %u", s);
    std::printf("\n");
  }
}
