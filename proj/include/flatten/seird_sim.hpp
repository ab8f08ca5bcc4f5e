#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "flatten/network.hpp"
#include "flatten/rng.hpp"

namespace flatten {

// Node states of the network process. R and D are absorbing: such nodes play
// no further role in the dynamics.
enum class NodeState : std::uint8_t { S, E, I, R, D };

struct SeirdParams {
  double transmission_rate = 0.0;    // per S-I link, 1/day
  double incubation_rate = 0.0;      // E -> I, 1/day
  double removal_rate = 0.0;         // I -> {R, D}, 1/day
  double death_prob_low = 0.0;       // applies while I/N <= capacity_threshold
  double death_prob_high = 0.0;      // applies while I/N >  capacity_threshold
  double capacity_threshold = 1.0;   // prevalence where mortality saturates
};

struct CompartmentCounts {
  std::uint32_t susceptible = 0;
  std::uint32_t exposed = 0;
  std::uint32_t infected = 0;
  std::uint32_t recovered = 0;
  std::uint32_t dead = 0;

  std::uint64_t total() const {
    return std::uint64_t(susceptible) + exposed + infected + recovered + dead;
  }
};

enum class EventKind : std::uint8_t { infection, incubation_end, recovery, death };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::infection;
  std::uint32_t node = 0;
};

// Dense node set with O(1) insert / remove / uniform sample.
class IndexedNodeSet {
 public:
  explicit IndexedNodeSet(std::uint32_t n) : pos_(n, kAbsent) {}

  void insert(std::uint32_t v) {
    pos_[v] = static_cast<std::uint32_t>(items_.size());
    items_.push_back(v);
  }

  void erase(std::uint32_t v) {
    const std::uint32_t at = pos_[v];
    const std::uint32_t last = items_.back();
    items_[at] = last;
    pos_[last] = at;
    items_.pop_back();
    pos_[v] = kAbsent;
  }

  std::uint32_t sample(std::uint64_t idx) const { return items_[idx]; }
  std::size_t size() const { return items_.size(); }

 private:
  static constexpr std::uint32_t kAbsent = 0xffffffffu;
  std::vector<std::uint32_t> items_;
  std::vector<std::uint32_t> pos_;
};

// Set of (susceptible, infectious) adjacent pairs with O(1) insert / remove /
// uniform sample. Every S-I pair has exactly one susceptible endpoint, so
// sampling a pair and infecting its S side draws pairs uniformly.
class SiEdgeSet {
 public:
  void reserve(std::size_t n) {
    items_.reserve(n);
    pos_.reserve(2 * n);
  }

  void insert(std::uint32_t s_node, std::uint32_t i_node) {
    pos_[key(s_node, i_node)] = static_cast<std::uint32_t>(items_.size());
    items_.emplace_back(s_node, i_node);
  }

  void erase(std::uint32_t s_node, std::uint32_t i_node) {
    const auto it = pos_.find(key(s_node, i_node));
    const std::uint32_t at = it->second;
    pos_.erase(it);
    const auto last = items_.back();
    items_[at] = last;
    items_.pop_back();
    if (at < items_.size()) pos_[key(last.first, last.second)] = at;
  }

  std::pair<std::uint32_t, std::uint32_t> sample(std::uint64_t idx) const {
    return items_[idx];
  }
  std::size_t size() const { return items_.size(); }

 private:
  static std::uint64_t key(std::uint32_t s_node, std::uint32_t i_node) {
    return (std::uint64_t(s_node) << 32) | i_node;
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> items_;
  std::unordered_map<std::uint64_t, std::uint32_t> pos_;
};

// Full state of one stochastic SEIRD realization, advanced event by event
// with the direct Gillespie method. One instance is strictly single-threaded;
// independent instances on distinct seeds may run in parallel sharing the
// Network read-only.
class NetworkSimState {
 public:
  // Exactly `initial_infected` uniformly chosen nodes start infectious, the
  // rest susceptible; the S-I pair set is built exactly.
  NetworkSimState(const Network& net, std::uint32_t initial_infected, Rng& rng);

  // One event of the direct method, never advancing past t_limit. Returns
  // the event applied, or nullopt when the clock hit t_limit first or no
  // event can fire at all (absorbing state: total rate is zero).
  std::optional<Event> step(const SeirdParams& params, Rng& rng,
                            double t_limit);

  double total_rate(const SeirdParams& params) const;
  bool absorbed(const SeirdParams& params) const {
    return total_rate(params) == 0.0;
  }

  const CompartmentCounts& counts() const { return counts_; }
  NodeState node_state(std::uint32_t v) const { return states_[v]; }
  std::size_t si_edge_count() const { return si_edges_.size(); }
  double time() const { return time_; }
  const Network& network() const { return *net_; }

 private:
  void infect(std::uint32_t v);          // S -> E
  void end_incubation(std::uint32_t v);  // E -> I
  void remove(std::uint32_t v, bool dies);

  const Network* net_;
  std::vector<NodeState> states_;
  CompartmentCounts counts_;
  IndexedNodeSet exposed_;
  IndexedNodeSet infectious_;
  SiEdgeSet si_edges_;
  double time_ = 0.0;
  std::uint64_t n_events_ = 0;
};

// Exact brute-force count of adjacent (S, I) pairs; the oracle for the
// incrementally maintained set.
std::uint64_t si_edge_recount(const NetworkSimState& state, const Network& net);

struct DailyCounts {
  int day = 0;
  CompartmentCounts counts;
  double transmission_rate = 0.0;  // rate in force from this day on
};

struct SimRun {
  std::vector<DailyCounts> daily;  // days 0..floor(t_final)
  std::vector<Event> events;       // populated only when requested
};

// Runs the process to t_final (or absorption), re-reading the transmission
// rate from the schedule at every day boundary. Exact for piecewise-constant
// daily schedules: a waiting time that would cross a boundary is discarded
// and redrawn there, which the memoryless property permits.
SimRun run_seird(const Network& net, SeirdParams params,
                 const std::function<double(int)>& transmission_schedule,
                 double t_final, std::uint64_t seed,
                 std::uint32_t initial_infected, bool record_events = false);

}  // namespace flatten
