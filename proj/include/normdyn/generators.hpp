#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "normdyn/error.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/random.hpp"

namespace normdyn {

namespace kind {
struct Complete {};
// Each node linked to its k nearest ring neighbors (k/2 per side).
struct RingLattice {
  std::size_t k = 2;
};
// n must equal rows * cols; node id = r * cols + c.
struct Grid2d {
  std::size_t rows = 1;
  std::size_t cols = 1;
};
struct ErdosRenyi {
  double p = 0.0;
};
struct WattsStrogatz {
  std::size_t k = 2;
  double p = 0.0;
};
// Seeded with an m-clique on nodes 0..m-1.
struct BarabasiAlbert {
  std::size_t m = 1;
};
}  // namespace kind

using GraphKind = std::variant<kind::Complete, kind::RingLattice, kind::Grid2d, kind::ErdosRenyi,
                               kind::WattsStrogatz, kind::BarabasiAlbert>;

namespace detail {

inline std::vector<Edge> ring_edges(std::size_t n, std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 1; o <= k / 2; ++o) {
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + o) % n)});
    }
  }
  return edges;
}

inline void check_ring(std::size_t n, std::size_t k, const char* what) {
  if (k % 2 != 0) throw InputError(std::string(what) + ": k must be even, got " + std::to_string(k));
  if (k >= n) throw InputError(std::string(what) + ": k must be < n");
}

inline void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + ": p must lie in [0,1]");
}

}  // namespace detail

/// Builds a graph of the requested kind. Pure in (kind, n, seed).
inline Graph generate(const GraphKind& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  struct Visitor {
    std::size_t n;
    Rng& rng;

    Graph operator()(const kind::Complete&) const {
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({NodeId(i), NodeId(j)});
      return Graph::from_edges(n, edges);
    }

    Graph operator()(const kind::RingLattice& k) const {
      detail::check_ring(n, k.k, "ring_lattice");
      return Graph::from_edges(n, detail::ring_edges(n, k.k));
    }

    Graph operator()(const kind::Grid2d& k) const {
      if (k.rows == 0 || k.cols == 0) throw InputError("grid2d: rows and cols must be positive");
      if (k.rows * k.cols != n) throw InputError("grid2d: n must equal rows*cols");
      std::vector<Edge> edges;
      for (std::size_t r = 0; r < k.rows; ++r) {
        for (std::size_t c = 0; c < k.cols; ++c) {
          const auto id = NodeId(r * k.cols + c);
          if (c + 1 < k.cols) edges.push_back({id, NodeId(id + 1)});
          if (r + 1 < k.rows) edges.push_back({id, NodeId(id + k.cols)});
        }
      }
      return Graph::from_edges(n, edges);
    }

    Graph operator()(const kind::ErdosRenyi& k) const {
      detail::check_probability(k.p, "erdos_renyi");
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform() < k.p) edges.push_back({NodeId(i), NodeId(j)});
      return Graph::from_edges(n, edges);
    }

    Graph operator()(const kind::WattsStrogatz& k) const {
      detail::check_ring(n, k.k, "watts_strogatz");
      detail::check_probability(k.p, "watts_strogatz");
      std::vector<std::set<NodeId>> adj(n);
      for (const Edge& e : detail::ring_edges(n, k.k)) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
      }
      // Clockwise edges (i, i+o) visited offset by offset, as in the usual construction.
      for (std::size_t o = 1; o <= k.k / 2; ++o) {
        for (std::size_t i = 0; i < n; ++i) {
          const auto u = NodeId(i);
          const auto v = NodeId((i + o) % n);
          if (rng.uniform() >= k.p) continue;
          if (!adj[u].contains(v)) continue;  // already rewired away
          if (adj[u].size() + 1 >= n) continue;  // no non-neighbor available
          NodeId w;
          do {
            w = NodeId(rng.below(n));
          } while (w == u || adj[u].contains(w));
          adj[u].erase(v);
          adj[v].erase(u);
          adj[u].insert(w);
          adj[w].insert(u);
        }
      }
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < n; ++i)
        for (NodeId j : adj[i])
          if (j > i) edges.push_back({NodeId(i), j});
      return Graph::from_edges(n, edges);
    }

    Graph operator()(const kind::BarabasiAlbert& k) const {
      if (k.m < 1) throw InputError("barabasi_albert: m must be >= 1");
      if (n < k.m) throw InputError("barabasi_albert: n must be >= m");
      std::vector<Edge> edges;
      // Every edge endpoint appears once here, so uniform draws are degree-proportional.
      std::vector<NodeId> endpoints;
      for (std::size_t i = 0; i < k.m; ++i) {
        for (std::size_t j = i + 1; j < k.m; ++j) {
          edges.push_back({NodeId(i), NodeId(j)});
          endpoints.push_back(NodeId(i));
          endpoints.push_back(NodeId(j));
        }
      }
      std::vector<NodeId> targets;
      for (std::size_t v = k.m; v < n; ++v) {
        targets.clear();
        if (endpoints.empty()) {
          // m == 1 and v == 1: the lone clique node has degree zero.
          targets.push_back(0);
        } else {
          while (targets.size() < k.m) {
            const NodeId t = endpoints[rng.below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
          }
        }
        for (NodeId t : targets) {
          edges.push_back({t, NodeId(v)});
          endpoints.push_back(t);
          endpoints.push_back(NodeId(v));
        }
      }
      return Graph::from_edges(n, edges);
    }
  };
  return std::visit(Visitor{n, rng}, spec);
}

}  // namespace normdyn
