#include "flatten/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flatten/optimal_policy.hpp"

namespace flatten {

void validate(const ControllerGains& g) {
  if (!(g.gain_susceptible > 0.0)) {
    throw std::invalid_argument("controller gains: gain_susceptible must be > 0");
  }
  if (!(g.gain_infected >= 0.0)) {
    throw std::invalid_argument("controller gains: gain_infected must be >= 0");
  }
  if (!(g.si_floor > 0.0)) {
    throw std::invalid_argument("controller gains: si_floor must be > 0");
  }
  if (!(g.beta_min > 0.0) || !(g.beta_max > g.beta_min)) {
    throw std::invalid_argument(
        "controller gains: need 0 < beta_min < beta_max");
  }
}

EpidemicState ReferenceTrajectory::at(double t) const {
  if (times.empty()) throw std::logic_error("reference trajectory is empty");
  const double offset = (t - times.front()) / dt;
  std::size_t idx = offset <= 0.0 ? 0 : static_cast<std::size_t>(offset);
  idx = std::min(idx, times.size() - 1);
  return {s_bar[idx], i_bar[idx]};
}

ReferenceTrajectory reference_trajectory(double i0_bar, double i_th,
                                         double gamma, double t_final,
                                         double dt) {
  const double beta_bar = optimal_beta({i0_bar, i_th, gamma});
  const Trajectory traj = integrate_sir(
      {1.0 - i0_bar, i0_bar}, [beta_bar](double) { return beta_bar; }, gamma,
      t_final, dt);

  ReferenceTrajectory ref;
  ref.beta_bar = beta_bar;
  ref.dt = dt;
  ref.times = traj.times;
  ref.s_bar.reserve(traj.size());
  ref.i_bar.reserve(traj.size());
  for (const EpidemicState& x : traj.states) {
    ref.s_bar.push_back(x.s);
    ref.i_bar.push_back(x.i);
  }
  return ref;
}

double feedback_beta_ideal(const EpidemicState& x, const EpidemicState& ref,
                           double beta_bar, const ControllerGains& g) {
  const double si = x.s * x.i;
  if (si == 0.0) {
    throw std::domain_error("feedback_beta_ideal: s*i == 0, law undefined");
  }
  return g.gain_infected * (ref.i - x.i) - g.gain_susceptible * (ref.s - x.s) +
         ref.s * ref.i / si * beta_bar;
}

double feedback_beta_saturated(const EpidemicState& x, const EpidemicState& ref,
                               double beta_bar, const ControllerGains& g) {
  const double si = std::max(x.s * x.i, g.si_floor);
  const double raw = g.gain_infected * (ref.i - x.i) -
                     g.gain_susceptible * (ref.s - x.s) +
                     ref.s * ref.i / si * beta_bar;
  return std::clamp(raw, g.beta_min, g.beta_max);
}

Trajectory simulate_tracking(const EpidemicState& x0,
                             const ReferenceTrajectory& ref,
                             const ControllerGains& g, double gamma,
                             double t_final, double dt) {
  validate(g);
  Trajectory traj;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-12));
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.betas.reserve(n_steps + 1);

  EpidemicState x = x0;
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(x);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double step = std::min(dt, t_final - t);
    const double b = feedback_beta_saturated(x, ref.at(t), ref.beta_bar, g);
    traj.betas.push_back(b);
    x = sir_rk4_step(x, {b, gamma}, step);
    t = (k + 1 == n_steps) ? t_final : t + step;
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  traj.betas.push_back(traj.betas.empty()
                           ? feedback_beta_saturated(x, ref.at(t), ref.beta_bar, g)
                           : traj.betas.back());
  return traj;
}

}  // namespace flatten
