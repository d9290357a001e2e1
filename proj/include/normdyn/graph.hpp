#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "normdyn/error.hpp"

namespace normdyn {

using NodeId = std::uint32_t;

// Unordered pair, stored with u < v once canonicalized.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Immutable undirected simple graph on nodes 0..n-1.
///
/// Adjacency is kept in compressed-row form with each neighbor list sorted,
/// so iteration order is deterministic and independent of input edge order.
class Graph {
 public:
  Graph() = default;

  // Duplicate pairs (in either orientation) collapse to one edge.
  // Throws InputError on out-of-range endpoints or self-loops.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g;
    g.n_ = n;
    g.edges_.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") has an endpoint outside [0," + std::to_string(n) + ")");
      }
      if (e.u == e.v) throw InputError("self-loop at node " + std::to_string(e.u));
      g.edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(2 * g.edges_.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : g.edges_) {
      g.targets_[cursor[e.u]++] = e.v;
      g.targets_[cursor[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    return g;
  }

  static Graph from_edges(std::size_t n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const NodeId> neighbors(std::size_t i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  // Canonical edge list: u < v, lexicographically sorted.
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(NodeId a, NodeId b) const {
    if (a >= n_ || b >= n_) return false;
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

// Union-find used for region and component counts.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

  std::size_t count() {
    std::size_t roots = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) roots += (find(i) == i);
    return roots;
  }

  std::size_t largest() {
    std::size_t best = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      if (find(i) == i) best = std::max(best, size_[i]);
    }
    return best;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace normdyn
