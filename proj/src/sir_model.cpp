#include "flatten/sir_model.hpp"

#include <cmath>
#include <stdexcept>

namespace flatten {

namespace {

constexpr double kSlack = 1e-9;

void check_in_simplex(const EpidemicState& x) {
  if (x.s < -kSlack || x.i < -kSlack || x.s + x.i > 1.0 + kSlack) {
    throw std::runtime_error(
        "integrate_sir: state left the unit simplex; reduce the step size");
  }
}

}  // namespace

Derivative sir_derivative(const EpidemicState& x, const SirParams& p) {
  const double flow = p.beta * x.i * x.s;
  return {-flow, flow - p.gamma * x.i};
}

EpidemicState sir_rk4_step(const EpidemicState& x, const SirParams& p,
                           double dt) {
  const Derivative k1 = sir_derivative(x, p);
  const Derivative k2 =
      sir_derivative({x.s + 0.5 * dt * k1.ds, x.i + 0.5 * dt * k1.di}, p);
  const Derivative k3 =
      sir_derivative({x.s + 0.5 * dt * k2.ds, x.i + 0.5 * dt * k2.di}, p);
  const Derivative k4 = sir_derivative({x.s + dt * k3.ds, x.i + dt * k3.di}, p);
  return {x.s + dt / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds),
          x.i + dt / 6.0 * (k1.di + 2.0 * k2.di + 2.0 * k3.di + k4.di)};
}

Trajectory integrate_sir(const EpidemicState& x0, const BetaSchedule& beta,
                         double gamma, double t_final, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("integrate_sir: dt must be > 0");
  if (t_final < 0.0) {
    throw std::invalid_argument("integrate_sir: t_final must be >= 0");
  }

  Trajectory traj;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-12));
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.betas.reserve(n_steps + 1);

  EpidemicState x = x0;
  check_in_simplex(x);
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(x);

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double step = std::min(dt, t_final - t);
    const double b = beta(t);
    traj.betas.push_back(b);
    x = sir_rk4_step(x, {b, gamma}, step);
    check_in_simplex(x);
    t = (k + 1 == n_steps) ? t_final : t + step;
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  // betas aligned with times: last entry is the rate a further step would use.
  traj.betas.push_back(beta(t));
  return traj;
}

double infected_of_susceptible(double s, const EpidemicState& x0,
                               const SirParams& p) {
  if (s <= 0.0) {
    throw std::domain_error("infected_of_susceptible: s must be > 0");
  }
  return p.gamma / p.beta * std::log(s / (1.0 - x0.i)) - s + 1.0;
}

double peak_susceptible(const SirParams& p) { return p.gamma / p.beta; }

double peak_infected(const EpidemicState& x0, const SirParams& p, double dt) {
  const double s_peak = peak_susceptible(p);
  if (x0.s <= s_peak) return x0.i;  // already past the peak at t = 0

  EpidemicState x = x0;
  double max_i = x.i;
  double t = 0.0;
  constexpr double kMaxTime = 1e6;
  while (x.s > s_peak && x.i > 1e-14) {
    x = sir_rk4_step(x, p, dt);
    check_in_simplex(x);
    max_i = std::max(max_i, x.i);
    t += dt;
    if (t > kMaxTime) {
      throw std::runtime_error("peak_infected: no peak before t = 1e6 days");
    }
  }
  // A few extra steps so the sampled maximum brackets the true peak.
  for (int k = 0; k < 8; ++k) {
    x = sir_rk4_step(x, p, dt);
    max_i = std::max(max_i, x.i);
  }
  return max_i;
}

}  // namespace flatten
