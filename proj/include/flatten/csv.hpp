#pragma once

#include <string>

#include "flatten/controller.hpp"
#include "flatten/harness.hpp"
#include "flatten/seird_sim.hpp"
#include "flatten/sir_model.hpp"

// CSV emission. All writers produce '\n' newlines and '.' decimal separators
// regardless of locale, and are byte-deterministic for identical inputs.

namespace flatten {

// t,s,i,beta
std::string trajectory_csv(const Trajectory& traj);

// t,s,i,s_bar,i_bar,beta
std::string tracking_csv(const Trajectory& traj, const ReferenceTrajectory& ref);

// day,S,E,I,R,D,beta_n
std::string sim_run_csv(const SimRun& run);

// day,S,E,I,R,D,beta_applied,s_meas,i_meas
std::string run_result_csv(const RunResult& res);

// day,i_mean,i_q1,i_q3,beta_mean,beta_q1,beta_q3
std::string ensemble_csv(const EnsembleSeries& series);

// delay,update,mode,metric,mean,q1,q3
std::string sweep_csv(const SweepResult& result);

}  // namespace flatten
