#pragma once

#include <functional>
#include <vector>

namespace flatten {

// Population-level epidemic state: susceptible and infected fractions.
struct EpidemicState {
  double s = 0.0;
  double i = 0.0;
};

struct SirParams {
  double beta = 0.0;   // transmission rate, 1/day
  double gamma = 0.0;  // recovery rate, 1/day
};

struct Derivative {
  double ds = 0.0;
  double di = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<EpidemicState> states;
  std::vector<double> betas;  // value applied over [times[k], times[k+1])

  std::size_t size() const { return times.size(); }
};

// day -> beta, sampled at the start of each integration step and held
// constant across it (policies change at discrete instants).
using BetaSchedule = std::function<double(double)>;

inline constexpr double kDefaultDt = 0.01;  // day

Derivative sir_derivative(const EpidemicState& x, const SirParams& p);

// One RK4 step of length dt under constant parameters.
EpidemicState sir_rk4_step(const EpidemicState& x, const SirParams& p,
                           double dt);

// Classical fixed-step RK4. Throws std::runtime_error if any state leaves
// [-1e-9, 1+1e-9] (step size too coarse for the supplied rates).
Trajectory integrate_sir(const EpidemicState& x0, const BetaSchedule& beta,
                         double gamma, double t_final, double dt = kDefaultDt);

// First integral i(s) of the constant-beta flow, anchored at s(0) = 1 - i(0):
// (gamma/beta) * ln(s / (1 - i(0))) - s + 1. Throws std::domain_error for
// s <= 0.
double infected_of_susceptible(double s, const EpidemicState& x0,
                               const SirParams& p);

// Susceptible fraction gamma/beta at which infections peak. When this is
// >= s(0) the peak sits at t = 0.
double peak_susceptible(const SirParams& p);

// Max of i along the constant-beta trajectory from x0; integrates just past
// the peak instead of to a fixed horizon.
double peak_infected(const EpidemicState& x0, const SirParams& p,
                     double dt = kDefaultDt);

}  // namespace flatten
