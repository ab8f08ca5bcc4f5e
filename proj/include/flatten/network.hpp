#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace flatten {

// Undirected simple graph over dense node ids 0..n-1, stored as a CSR
// adjacency with sorted neighbor lists. Immutable once built; safe to share
// read-only across threads.
class Network {
 public:
  Network(std::uint32_t n_nodes,
          std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  std::uint32_t n_nodes() const { return n_nodes_; }
  std::uint64_t n_edges() const { return n_edges_; }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::uint32_t degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  double mean_degree() const {
    return n_nodes_ == 0 ? 0.0 : 2.0 * static_cast<double>(n_edges_) / n_nodes_;
  }

  // One "u v" pair per line with u < v, lexicographically sorted.
  void write_edge_list(std::ostream& out) const;

 private:
  std::uint32_t n_nodes_ = 0;
  std::uint64_t n_edges_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
};

// Erdos-Renyi sample: every unordered pair of distinct nodes is an edge
// independently with probability p. Uses geometric skipping over the pair
// sequence, so generation is O(n + |E|) rather than O(n^2). Deterministic
// given (n, p, seed).
Network erdos_renyi(std::uint32_t n, double p, std::uint64_t seed);

}  // namespace flatten
