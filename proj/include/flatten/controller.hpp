#pragma once

#include "flatten/sir_model.hpp"

namespace flatten {

// Gains and bounds of the nonlinear tracking law. gain_susceptible must be
// positive; gain_infected may be zero. si_floor guards the s*i division near
// extinction and is meant to sit far below any epidemiologically meaningful
// product.
struct ControllerGains {
  double gain_infected = 50.0;
  double gain_susceptible = 20.0;
  double si_floor = 1e-6;
  double beta_min = 0.0;
  double beta_max = 0.0;
};

void validate(const ControllerGains& g);

// Nominal (s_bar, i_bar) solution of the SIR flow under the constant
// curve-flattening optimum beta_bar; the trajectory the feedback law tracks.
struct ReferenceTrajectory {
  std::vector<double> times;  // uniform grid starting at 0
  std::vector<double> s_bar;
  std::vector<double> i_bar;
  double beta_bar = 0.0;
  double dt = kDefaultDt;

  // Zero-order hold: the most recent stored sample at or before t.
  EpidemicState at(double t) const;
};

ReferenceTrajectory reference_trajectory(double i0_bar, double i_th,
                                         double gamma, double t_final,
                                         double dt = kDefaultDt);

// Unclamped tracking law
//   gain_i * (i_bar - i) - gain_s * (s_bar - s) + (s_bar*i_bar)/(s*i) * beta_bar.
// Throws std::domain_error when s*i == 0; use the saturated form near
// extinction.
double feedback_beta_ideal(const EpidemicState& x, const EpidemicState& ref,
                           double beta_bar, const ControllerGains& g);

// Practical form: s*i floored at si_floor before the division, output
// clamped to [beta_min, beta_max]. Total function.
double feedback_beta_saturated(const EpidemicState& x, const EpidemicState& ref,
                               double beta_bar, const ControllerGains& g);

// Closed loop of the saturated law around the SIR dynamics; the control is
// refreshed at the start of every step and held constant across it.
Trajectory simulate_tracking(const EpidemicState& x0,
                             const ReferenceTrajectory& ref,
                             const ControllerGains& g, double gamma,
                             double t_final, double dt = kDefaultDt);

}  // namespace flatten
