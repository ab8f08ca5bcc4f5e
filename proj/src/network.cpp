#include "flatten/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flatten/rng.hpp"

namespace flatten {

Network::Network(std::uint32_t n_nodes,
                 std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : n_nodes_(n_nodes), n_edges_(edges.size()) {
  offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u == v || u >= n_nodes || v >= n_nodes) {
      throw std::invalid_argument("network: bad edge");
    }
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t k = 1; k < offsets_.size(); ++k) {
    offsets_[k] += offsets_[k - 1];
  }
  neighbors_.resize(2 * edges.size());
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    neighbors_[cursor[u]++] = v;
    neighbors_[cursor[v]++] = u;
  }
  for (std::uint32_t v = 0; v < n_nodes_; ++v) {
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

void Network::write_edge_list(std::ostream& out) const {
  for (std::uint32_t u = 0; u < n_nodes_; ++u) {
    for (std::uint32_t v : neighbors(u)) {
      if (v > u) out << u << ' ' << v << '\n';
    }
  }
}

Network erdos_renyi(std::uint32_t n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi: n must be >= 1");
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("erdos_renyi: p must lie in [0, 1]");
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  if (p == 0.0 || n == 1) return Network(n, std::move(edges));

  if (p == 1.0) {
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (std::uint32_t v = 1; v < n; ++v) {
      for (std::uint32_t u = 0; u < v; ++u) edges.emplace_back(u, v);
    }
    return Network(n, std::move(edges));
  }

  // Batagelj-Brandes: jump over skipped pairs with geometric gaps.
  Rng rng(seed);
  const double log_q = std::log1p(-p);
  edges.reserve(static_cast<std::size_t>(p * 0.5 * n * (n - 1.0) * 1.1) + 16);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < static_cast<std::int64_t>(n)) {
    const double r = rng.u01();  // (0,1] keeps the gap finite
    w += 1 + static_cast<std::int64_t>(std::floor(std::log(r) / log_q));
    while (w >= v && v < static_cast<std::int64_t>(n)) {
      w -= v;
      ++v;
    }
    if (v < static_cast<std::int64_t>(n)) {
      edges.emplace_back(static_cast<std::uint32_t>(w),
                         static_cast<std::uint32_t>(v));
    }
  }
  return Network(n, std::move(edges));
}

}  // namespace flatten
