#include "flatten/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flatten {

double quantize_beta(double beta, int levels, double beta_min, double beta_max) {
  if (!(beta_min < beta_max)) {
    throw std::invalid_argument("quantize_beta: need beta_min < beta_max");
  }
  if (levels < 2) throw std::invalid_argument("quantize_beta: levels >= 2");
  const double step = (beta_max - beta_min) / (levels - 1);
  const double pos = (beta - beta_min) / step;
  double k = std::floor(pos + 0.5);
  if (k - pos == 0.5) k -= 1.0;  // tie: take the more restrictive level
  k = std::clamp(k, 0.0, static_cast<double>(levels - 1));
  return beta_min + k * step;
}

EpidemicState measure(const std::vector<EpidemicState>& history, int t,
                      const MeasurementConfig& mc, Rng& delay_rng,
                      Rng& noise_rng) {
  if (t < 0 || static_cast<std::size_t>(t) >= history.size()) {
    throw std::out_of_range("measure: t outside recorded history");
  }
  auto d = static_cast<int>(
      std::lround(delay_rng.normal(mc.delay_mean, mc.delay_std)));
  d = std::clamp(d, 0, t);
  const EpidemicState& truth = history[static_cast<std::size_t>(t - d)];
  double s = truth.s * (1.0 + noise_rng.normal(0.0, mc.noise_std));
  double i = truth.i * (1.0 + noise_rng.normal(0.0, mc.noise_std));
  s = std::clamp(s, 0.0, 1.0);
  i = std::clamp(i, 0.0, 1.0);
  if (s + i > 1.0) {
    const double scale = 1.0 / (s + i);
    s *= scale;
    i *= scale;
  }
  return {s, i};
}

ScenarioDerived derive_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  ScenarioDerived der;
  der.maps = {cfg.epidemic.incubation_rate, cfg.epidemic.removal_rate,
              cfg.network.mean_degree};
  der.gamma_eff = effective_gamma(der.maps);
  der.beta_max_sir = inverse_input_map(cfg.epidemic.transmission_rate_max,
                                       der.maps);
  der.beta_min_sir = cfg.policy.beta_min_fraction * der.beta_max_sir;
  der.i0 = static_cast<double>(cfg.epidemic.initial_infected) / cfg.network.n;
  der.i_bar0 = cfg.mode == ReferenceMode::matched
                   ? der.i0
                   : cfg.epidemic.capacity_threshold;
  der.i_th_ref = std::max(cfg.epidemic.capacity_threshold, der.i_bar0);
  der.reference = reference_trajectory(der.i_bar0, der.i_th_ref, der.gamma_eff,
                                       cfg.horizon_days);
  der.gains = {cfg.controller.gain_infected, cfg.controller.gain_susceptible,
               cfg.controller.si_floor, der.beta_min_sir, der.beta_max_sir};
  validate(der.gains);
  return der;
}

namespace {

double baseline_beta_sir(const ScenarioDerived& der, ControlArm arm, int day) {
  if (arm == ControlArm::lockdown && day < kLockdownDays) {
    return der.beta_min_sir;
  }
  return der.beta_max_sir;
}

void finalize_metrics(const ScenarioConfig& cfg, RunResult& res) {
  const double n = cfg.network.n;
  const int horizon = cfg.horizon_days;
  res.final_deaths = res.days.back().counts.dead;
  res.beta_integral = 0.0;
  for (int d = 0; d < horizon; ++d) res.beta_integral += res.days[d].beta_sir;
  res.peak_i = 0.0;
  int above = 0;
  for (const ClosedLoopDay& day : res.days) {
    const double i = day.counts.infected / n;
    res.peak_i = std::max(res.peak_i, i);
    if (i > cfg.epidemic.capacity_threshold) ++above;
  }
  res.frac_days_above = static_cast<double>(above) / res.days.size();
}

}  // namespace

RunResult run_arm(const ScenarioConfig& cfg, const ScenarioDerived& der,
                  std::uint64_t master_seed, int run_index, ControlArm arm) {
  const auto run = static_cast<std::uint64_t>(run_index);
  const auto arm_id = static_cast<std::uint64_t>(arm);

  // Network and initial infected set are shared across arms of a run index.
  const Network net = erdos_renyi(
      cfg.network.n, cfg.network.edge_probability(),
      derive_seed(master_seed, run, std::uint64_t(StreamPurpose::network)));
  Rng init_rng(derive_seed(master_seed, run, std::uint64_t(StreamPurpose::init)));
  Rng sim_rng(derive_seed(master_seed, run,
                          std::uint64_t(StreamPurpose::simulation), arm_id));
  Rng delay_rng(derive_seed(master_seed, run,
                            std::uint64_t(StreamPurpose::delay), arm_id));
  Rng noise_rng(derive_seed(master_seed, run,
                            std::uint64_t(StreamPurpose::noise), arm_id));

  NetworkSimState state(net, cfg.epidemic.initial_infected, init_rng);
  SeirdParams params{0.0,
                     cfg.epidemic.incubation_rate,
                     cfg.epidemic.removal_rate,
                     cfg.epidemic.death_prob_low,
                     cfg.epidemic.death_prob_high,
                     cfg.epidemic.capacity_threshold};

  const int horizon = cfg.horizon_days;
  RunResult res;
  res.days.resize(horizon + 1);
  std::vector<EpidemicState> history;
  history.reserve(horizon + 1);
  history.push_back(output_map(state.counts(), net.n_nodes()));

  double beta_sir = 0.0;
  double beta_link = 0.0;
  EpidemicState meas{0.0, 0.0};
  for (int day = 0; day < horizon; ++day) {
    if (arm == ControlArm::controlled) {
      if (day % cfg.policy.update_interval == 0) {
        meas = measure(history, day, cfg.measurement, delay_rng, noise_rng);
        const double raw = feedback_beta_saturated(
            meas, der.reference.at(day), der.reference.beta_bar, der.gains);
        beta_sir = quantize_beta(raw, cfg.policy.quantization_levels,
                                 der.beta_min_sir, der.beta_max_sir);
        beta_link = input_map(beta_sir, der.maps);
      }
    } else {
      beta_sir = baseline_beta_sir(der, arm, day);
      beta_link = input_map(beta_sir, der.maps);
    }

    ClosedLoopDay& row = res.days[day];
    row.counts = state.counts();
    row.beta_link = beta_link;
    row.beta_sir = beta_sir;
    row.s_meas = meas.s;
    row.i_meas = meas.i;
    row.si_edges = state.si_edge_count();

    params.transmission_rate = beta_link;
    const double boundary = day + 1;
    while (state.time() < boundary) state.step(params, sim_rng, boundary);
    history.push_back(output_map(state.counts(), net.n_nodes()));
  }

  ClosedLoopDay& last = res.days[horizon];
  last.counts = state.counts();
  last.beta_link = beta_link;
  last.beta_sir = beta_sir;
  last.s_meas = meas.s;
  last.i_meas = meas.i;
  last.si_edges = state.si_edge_count();

  finalize_metrics(cfg, res);
  return res;
}

std::vector<OdeLoopDay> run_closed_loop_ode(const ScenarioConfig& cfg,
                                            const ScenarioDerived& der,
                                            std::uint64_t master_seed,
                                            int run_index) {
  const auto run = static_cast<std::uint64_t>(run_index);
  const auto arm_id = static_cast<std::uint64_t>(ControlArm::controlled);
  Rng delay_rng(derive_seed(master_seed, run,
                            std::uint64_t(StreamPurpose::delay), arm_id));
  Rng noise_rng(derive_seed(master_seed, run,
                            std::uint64_t(StreamPurpose::noise), arm_id));

  const int horizon = cfg.horizon_days;
  EpidemicState x{1.0 - der.i0, der.i0};
  std::vector<EpidemicState> history{x};
  std::vector<OdeLoopDay> out(horizon + 1);

  double beta_sir = 0.0;
  for (int day = 0; day < horizon; ++day) {
    if (day % cfg.policy.update_interval == 0) {
      const EpidemicState m =
          measure(history, day, cfg.measurement, delay_rng, noise_rng);
      const double raw = feedback_beta_saturated(
          m, der.reference.at(day), der.reference.beta_bar, der.gains);
      beta_sir = quantize_beta(raw, cfg.policy.quantization_levels,
                               der.beta_min_sir, der.beta_max_sir);
    }
    const EpidemicState ref = der.reference.at(day);
    out[day] = {x.s, x.i, beta_sir, ref.s, ref.i};

    const int steps_per_day = static_cast<int>(std::lround(1.0 / kDefaultDt));
    for (int k = 0; k < steps_per_day; ++k) {
      x = sir_rk4_step(x, {beta_sir, der.gamma_eff}, kDefaultDt);
    }
    history.push_back(x);
  }
  const EpidemicState ref = der.reference.at(horizon);
  out[horizon] = {x.s, x.i, beta_sir, ref.s, ref.i};
  return out;
}

double metric_beta_reduction(const RunResult& run, const RunResult& baseline) {
  if (run.days.size() != baseline.days.size()) {
    throw std::invalid_argument(
        "metric_beta_reduction: runs must share the horizon");
  }
  return (baseline.beta_integral - run.beta_integral) / baseline.beta_integral;
}

double metric_death_reduction(const RunResult& run,
                              const RunResult& uncontrolled) {
  if (uncontrolled.final_deaths == 0.0) {
    throw std::domain_error(
        "metric_death_reduction: uncontrolled arm has no deaths");
  }
  return (uncontrolled.final_deaths - run.final_deaths) /
         uncontrolled.final_deaths;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

MetricSummary summarize(const std::vector<double>& v) {
  return {mean_of(v), quantile(v, 0.25), quantile(v, 0.75)};
}

// Runs `body(r)` for r in [0, n); the OpenMP path writes into preallocated
// slots so results are independent of scheduling. Exceptions are carried out
// of the parallel region by hand.
template <typename Body>
void for_each_run(int n, bool parallel, Body&& body) {
#ifdef _OPENMP
  if (parallel) {
    bool failed = false;
    std::string message;
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < n; ++r) {
      try {
        body(r);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          message = e.what();
        }
      }
    }
    if (failed) throw std::runtime_error("monte carlo run failed: " + message);
    return;
  }
#else
  (void)parallel;
#endif
  for (int r = 0; r < n; ++r) body(r);
}

EnsembleSeries build_series(const ScenarioConfig& cfg,
                            const std::vector<RunResult>& runs) {
  const int horizon = cfg.horizon_days;
  const double n = cfg.network.n;
  EnsembleSeries series;
  series.i_mean.resize(horizon + 1);
  series.i_q1.resize(horizon + 1);
  series.i_q3.resize(horizon + 1);
  series.beta_mean.resize(horizon + 1);
  series.beta_q1.resize(horizon + 1);
  series.beta_q3.resize(horizon + 1);
  std::vector<double> i_day(runs.size());
  std::vector<double> b_day(runs.size());
  for (int d = 0; d <= horizon; ++d) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      i_day[r] = runs[r].days[d].counts.infected / n;
      b_day[r] = runs[r].days[d].beta_sir;
    }
    series.i_mean[d] = mean_of(i_day);
    series.i_q1[d] = quantile(i_day, 0.25);
    series.i_q3[d] = quantile(i_day, 0.75);
    series.beta_mean[d] = mean_of(b_day);
    series.beta_q1[d] = quantile(b_day, 0.25);
    series.beta_q3[d] = quantile(b_day, 0.75);
  }
  return series;
}

}  // namespace

BaselineSet run_baselines(const ScenarioConfig& cfg, std::uint64_t master_seed,
                          bool parallel) {
  const ScenarioDerived der = derive_scenario(cfg);
  BaselineSet set;
  set.uncontrolled.resize(cfg.runs);
  set.lockdown.resize(cfg.runs);
  for_each_run(cfg.runs, parallel, [&](int r) {
    set.uncontrolled[r] =
        run_arm(cfg, der, master_seed, r, ControlArm::uncontrolled);
    set.lockdown[r] = run_arm(cfg, der, master_seed, r, ControlArm::lockdown);
  });
  return set;
}

EnsembleResult run_monte_carlo(const ScenarioConfig& cfg,
                               std::uint64_t master_seed, bool parallel,
                               const BaselineSet* shared_baselines) {
  const ScenarioDerived der = derive_scenario(cfg);
  BaselineSet local;
  if (shared_baselines == nullptr) {
    local = run_baselines(cfg, master_seed, parallel);
    shared_baselines = &local;
  }
  if (static_cast<int>(shared_baselines->uncontrolled.size()) < cfg.runs) {
    throw std::invalid_argument("run_monte_carlo: baseline set too small");
  }

  EnsembleResult out;
  out.controlled.resize(cfg.runs);
  for_each_run(cfg.runs, parallel, [&](int r) {
    out.controlled[r] = run_closed_loop(cfg, der, master_seed, r);
  });

  out.death_reductions.resize(cfg.runs);
  out.beta_reductions.resize(cfg.runs);
  std::vector<double> peaks(cfg.runs), above(cfg.runs), deaths(cfg.runs);
  for (int r = 0; r < cfg.runs; ++r) {
    out.death_reductions[r] = metric_death_reduction(
        out.controlled[r], shared_baselines->uncontrolled[r]);
    out.beta_reductions[r] =
        metric_beta_reduction(out.controlled[r], shared_baselines->lockdown[r]);
    peaks[r] = out.controlled[r].peak_i;
    above[r] = out.controlled[r].frac_days_above;
    deaths[r] = out.controlled[r].final_deaths;
  }
  out.death_reduction = summarize(out.death_reductions);
  out.beta_reduction = summarize(out.beta_reductions);
  out.peak_i = summarize(peaks);
  out.frac_days_above = summarize(above);
  out.final_deaths = summarize(deaths);
  out.series = build_series(cfg, out.controlled);
  return out;
}

SweepResult sweep(const ScenarioConfig& base, std::uint64_t master_seed,
                  const std::vector<double>& delays,
                  const std::vector<int>& updates,
                  const std::vector<ReferenceMode>& modes, bool parallel) {
  const BaselineSet baselines = run_baselines(base, master_seed, parallel);
  SweepResult result;
  result.cells.reserve(modes.size() * delays.size() * updates.size());
  for (ReferenceMode mode : modes) {
    for (double delay : delays) {
      for (int update : updates) {
        ScenarioConfig cfg = base;
        cfg.mode = mode;
        cfg.measurement.delay_mean = delay;
        cfg.policy.update_interval = update;
        const EnsembleResult ens =
            run_monte_carlo(cfg, master_seed, parallel, &baselines);
        SweepCell cell;
        cell.delay_mean = delay;
        cell.update_interval = update;
        cell.mode = mode;
        cell.death_reduction = ens.death_reduction;
        cell.beta_reduction = ens.beta_reduction;
        cell.peak_i = ens.peak_i;
        cell.frac_days_above = ens.frac_days_above;
        cell.series = ens.series;
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

}  // namespace flatten
