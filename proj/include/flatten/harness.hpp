#pragma once

#include <cstdint>
#include <vector>

#include "flatten/controller.hpp"
#include "flatten/coupling_maps.hpp"
#include "flatten/scenario.hpp"
#include "flatten/seird_sim.hpp"

namespace flatten {

// Nearest of `levels` equally spaced values on [beta_min, beta_max]; exact
// ties round toward the lower (more restrictive) level.
double quantize_beta(double beta, int levels, double beta_min, double beta_max);

// Measurement channel: a normal delay rounded to whole days and clamped to
// [0, t] picks the day that is read; each component is then scaled by
// (1 + eta) with independent eta ~ N(0, noise_std), clamped to [0, 1], and
// rescaled proportionally if s + i spills over 1.
EpidemicState measure(const std::vector<EpidemicState>& history, int t,
                      const MeasurementConfig& mc, Rng& delay_rng,
                      Rng& noise_rng);

enum class ControlArm : std::uint64_t {
  controlled = 1,
  uncontrolled = 2,  // transmission pinned at its maximum throughout
  lockdown = 3,      // minimum for the first 60 days, maximum afterwards
};

inline constexpr int kLockdownDays = 60;

struct ClosedLoopDay {
  CompartmentCounts counts;
  double beta_link = 0.0;  // network-level rate in force from this day on
  double beta_sir = 0.0;   // population-level value it was mapped from
  double s_meas = 0.0;     // measurement behind the latest policy decision
  double i_meas = 0.0;
  std::uint64_t si_edges = 0;
};

struct RunResult {
  std::vector<ClosedLoopDay> days;  // exactly horizon + 1 entries
  double final_deaths = 0.0;
  double beta_integral = 0.0;  // daily applied SIR-level beta, day 0..T-1
  double peak_i = 0.0;
  double frac_days_above = 0.0;  // days with I/N above capacity / (T+1)
};

// Everything runs of one scenario share: the coupling maps, the SIR-level
// control bounds, the tracked reference, and the controller gains.
//
// The reference always starts from a feasible flattening problem: in
// mismatched mode it saturates the capacity (i_bar(0) = i_th), in matched
// mode it starts from the true initial prevalence, with the reference
// capacity lifted to that value whenever the outbreak already exceeds it.
struct ScenarioDerived {
  MapParams maps;
  double gamma_eff = 0.0;
  double beta_max_sir = 0.0;
  double beta_min_sir = 0.0;
  double i0 = 0.0;       // true initial prevalence
  double i_bar0 = 0.0;   // reference start
  double i_th_ref = 0.0; // capacity used to build the reference
  ReferenceTrajectory reference;
  ControllerGains gains;
};

ScenarioDerived derive_scenario(const ScenarioConfig& cfg);

// One stochastic closed-loop (or baseline) realization. All randomness comes
// from streams derived from (master_seed, run_index, purpose, arm); the
// network and the initial infected set are arm-independent, so baselines are
// paired with the controlled run of the same index.
RunResult run_arm(const ScenarioConfig& cfg, const ScenarioDerived& der,
                  std::uint64_t master_seed, int run_index, ControlArm arm);

inline RunResult run_closed_loop(const ScenarioConfig& cfg,
                                 const ScenarioDerived& der,
                                 std::uint64_t master_seed, int run_index) {
  return run_arm(cfg, der, master_seed, run_index, ControlArm::controlled);
}

// Same loop with the network plant replaced by the deterministic SIR flow at
// the effective recovery rate; used to validate the policy pipeline in
// isolation from network stochasticity.
struct OdeLoopDay {
  double s = 0.0;
  double i = 0.0;
  double beta_sir = 0.0;
  double s_ref = 0.0;
  double i_ref = 0.0;
};

std::vector<OdeLoopDay> run_closed_loop_ode(const ScenarioConfig& cfg,
                                            const ScenarioDerived& der,
                                            std::uint64_t master_seed,
                                            int run_index);

// (integral beta_baseline - integral beta_run) / integral beta_baseline over
// the shared horizon; positive means more distancing than the baseline.
double metric_beta_reduction(const RunResult& run, const RunResult& baseline);

// (D_uncontrolled - D_run) / D_uncontrolled. Throws std::domain_error when
// the uncontrolled arm has no deaths.
double metric_death_reduction(const RunResult& run,
                              const RunResult& uncontrolled);

struct MetricSummary {
  double mean = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

// Per-day ensemble statistics of prevalence and applied SIR-level beta.
struct EnsembleSeries {
  std::vector<double> i_mean, i_q1, i_q3;
  std::vector<double> beta_mean, beta_q1, beta_q3;
};

struct BaselineSet {
  std::vector<RunResult> uncontrolled;
  std::vector<RunResult> lockdown;
};

struct EnsembleResult {
  std::vector<RunResult> controlled;
  std::vector<double> death_reductions;  // per run, paired baselines
  std::vector<double> beta_reductions;
  EnsembleSeries series;
  MetricSummary death_reduction, beta_reduction, peak_i, frac_days_above,
      final_deaths;
};

// Baseline arms depend only on (scenario epidemic/network, master_seed), not
// on delay/update/mode, so a sweep computes them once and shares them.
BaselineSet run_baselines(const ScenarioConfig& cfg, std::uint64_t master_seed,
                          bool parallel = true);

// Monte Carlo ensemble. `parallel` selects the OpenMP path; the serial path
// is kept as the reference implementation and both produce identical results
// (runs own their RNG streams, aggregation is a serial reduction).
EnsembleResult run_monte_carlo(const ScenarioConfig& cfg,
                               std::uint64_t master_seed, bool parallel = true,
                               const BaselineSet* shared_baselines = nullptr);

struct SweepCell {
  double delay_mean = 0.0;
  int update_interval = 0;
  ReferenceMode mode = ReferenceMode::mismatched;
  MetricSummary death_reduction, beta_reduction, peak_i, frac_days_above;
  EnsembleSeries series;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // modes outer, delays, then updates
};

SweepResult sweep(const ScenarioConfig& base, std::uint64_t master_seed,
                  const std::vector<double>& delays,
                  const std::vector<int>& updates,
                  const std::vector<ReferenceMode>& modes,
                  bool parallel = true);

// Linear-interpolation quantile of an unsorted sample (R type 7).
double quantile(std::vector<double> values, double q);

}  // namespace flatten
