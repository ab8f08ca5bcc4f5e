#include "flatten/seird_sim.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace flatten {

NetworkSimState::NetworkSimState(const Network& net,
                                 std::uint32_t initial_infected, Rng& rng)
    : net_(&net),
      states_(net.n_nodes(), NodeState::S),
      exposed_(net.n_nodes()),
      infectious_(net.n_nodes()) {
  const std::uint32_t n = net.n_nodes();
  if (initial_infected == 0 || initial_infected >= n) {
    throw std::invalid_argument("init: need 0 < initial_infected < n");
  }

  // Partial Fisher-Yates over the node ids.
  std::vector<std::uint32_t> ids(n);
  for (std::uint32_t v = 0; v < n; ++v) ids[v] = v;
  for (std::uint32_t k = 0; k < initial_infected; ++k) {
    const auto j = k + static_cast<std::uint32_t>(rng.below(n - k));
    std::swap(ids[k], ids[j]);
    states_[ids[k]] = NodeState::I;
  }

  counts_.infected = initial_infected;
  counts_.susceptible = n - initial_infected;
  si_edges_.reserve(static_cast<std::size_t>(net.mean_degree() *
                                             initial_infected * 2.0) +
                    64);
  for (std::uint32_t k = 0; k < initial_infected; ++k) {
    const std::uint32_t v = ids[k];
    infectious_.insert(v);
    for (std::uint32_t u : net.neighbors(v)) {
      if (states_[u] == NodeState::S) si_edges_.insert(u, v);
    }
  }
}

double NetworkSimState::total_rate(const SeirdParams& params) const {
  return params.transmission_rate * static_cast<double>(si_edges_.size()) +
         params.incubation_rate * counts_.exposed +
         params.removal_rate * counts_.infected;
}

std::optional<Event> NetworkSimState::step(const SeirdParams& params, Rng& rng,
                                           double t_limit) {
  const double rate_infection =
      params.transmission_rate * static_cast<double>(si_edges_.size());
  const double rate_incubation = params.incubation_rate * counts_.exposed;
  const double rate_removal = params.removal_rate * counts_.infected;
  const double total = rate_infection + rate_incubation + rate_removal;
  if (total == 0.0) {
    if (time_ < t_limit) time_ = t_limit;
    return std::nullopt;
  }

  const double dt = rng.exponential(total);
  if (time_ + dt > t_limit) {
    time_ = t_limit;  // waiting time discarded; redrawing later is exact
    return std::nullopt;
  }
  time_ += dt;

  Event ev;
  ev.time = time_;
  const double u = rng.u01_left() * total;
  if (u < rate_infection) {
    const auto [s_node, i_node] = si_edges_.sample(rng.below(si_edges_.size()));
    (void)i_node;
    ev.kind = EventKind::infection;
    ev.node = s_node;
    infect(s_node);
  } else if (u < rate_infection + rate_incubation) {
    const std::uint32_t v = exposed_.sample(rng.below(exposed_.size()));
    ev.kind = EventKind::incubation_end;
    ev.node = v;
    end_incubation(v);
  } else {
    const std::uint32_t v = infectious_.sample(rng.below(infectious_.size()));
    // Prevalence is evaluated before the transition is applied.
    const double prevalence =
        static_cast<double>(counts_.infected) / static_cast<double>(net_->n_nodes());
    const double p_death = prevalence <= params.capacity_threshold
                               ? params.death_prob_low
                               : params.death_prob_high;
    const bool dies = rng.u01_left() < p_death;
    ev.kind = dies ? EventKind::death : EventKind::recovery;
    ev.node = v;
    remove(v, dies);
  }

#ifndef NDEBUG
  if (++n_events_ % 1000 == 0) {
    assert(si_edges_.size() == si_edge_recount(*this, *net_));
  }
#else
  ++n_events_;
#endif
  return ev;
}

void NetworkSimState::infect(std::uint32_t v) {
  states_[v] = NodeState::E;
  --counts_.susceptible;
  ++counts_.exposed;
  exposed_.insert(v);
  for (std::uint32_t u : net_->neighbors(v)) {
    if (states_[u] == NodeState::I) si_edges_.erase(v, u);
  }
}

void NetworkSimState::end_incubation(std::uint32_t v) {
  states_[v] = NodeState::I;
  --counts_.exposed;
  ++counts_.infected;
  exposed_.erase(v);
  infectious_.insert(v);
  for (std::uint32_t u : net_->neighbors(v)) {
    if (states_[u] == NodeState::S) si_edges_.insert(u, v);
  }
}

void NetworkSimState::remove(std::uint32_t v, bool dies) {
  states_[v] = dies ? NodeState::D : NodeState::R;
  --counts_.infected;
  if (dies) {
    ++counts_.dead;
  } else {
    ++counts_.recovered;
  }
  infectious_.erase(v);
  for (std::uint32_t u : net_->neighbors(v)) {
    if (states_[u] == NodeState::S) si_edges_.erase(u, v);
  }
}

std::uint64_t si_edge_recount(const NetworkSimState& state, const Network& net) {
  std::uint64_t count = 0;
  for (std::uint32_t u = 0; u < net.n_nodes(); ++u) {
    if (state.node_state(u) != NodeState::S) continue;
    for (std::uint32_t v : net.neighbors(u)) {
      if (state.node_state(v) == NodeState::I) ++count;
    }
  }
  return count;
}

SimRun run_seird(const Network& net, SeirdParams params,
                 const std::function<double(int)>& transmission_schedule,
                 double t_final, std::uint64_t seed,
                 std::uint32_t initial_infected, bool record_events) {
  if (!(t_final > 0.0)) {
    throw std::invalid_argument("run_seird: t_final must be > 0");
  }

  Rng init_rng(derive_seed(seed, 0, std::uint64_t(StreamPurpose::init)));
  Rng sim_rng(derive_seed(seed, 0, std::uint64_t(StreamPurpose::simulation)));
  NetworkSimState state(net, initial_infected, init_rng);

  SimRun run;
  const int last_day = static_cast<int>(std::floor(t_final));
  run.daily.reserve(last_day + 1);
  params.transmission_rate = transmission_schedule(0);
  run.daily.push_back({0, state.counts(), params.transmission_rate});

  int day = 0;
  while (state.time() < t_final) {
    const double boundary = std::min(static_cast<double>(day + 1), t_final);
    const auto ev = state.step(params, sim_rng, boundary);
    if (ev) {
      if (record_events) run.events.push_back(*ev);
      continue;
    }
    if (state.time() >= t_final && day + 1 > last_day) break;
    ++day;
    params.transmission_rate = transmission_schedule(day);
    run.daily.push_back({day, state.counts(), params.transmission_rate});
    if (day == last_day && state.time() >= t_final) break;
  }
  return run;
}

}  // namespace flatten
