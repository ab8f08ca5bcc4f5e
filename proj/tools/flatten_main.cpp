#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flatten/csv.hpp"
#include "flatten/harness.hpp"
#include "flatten/optimal_policy.hpp"
#include "flatten/scenario.hpp"

namespace fs = std::filesystem;
using namespace flatten;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

ScenarioConfig load_or_default(const std::string& scenario_path) {
  return scenario_path.empty() ? default_codogno() : load_scenario(scenario_path);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const ScenarioConfig& cfg) {
  if (flag) return *flag;
  if (cfg.master_seed) return *cfg.master_seed;
  throw std::runtime_error(
      "no seed given: pass --seed or set master_seed in the scenario file "
      "(wall-clock seeding is not supported)");
}

nlohmann::json metadata_json(const ScenarioConfig& cfg, std::uint64_t seed,
                             const ScenarioDerived& der) {
  nlohmann::json m;
  m["scenario"] = nlohmann::json::parse(scenario_to_json(cfg));
  m["resolved_seed"] = seed;
  std::vector<double> grid(cfg.policy.quantization_levels);
  const double step = (der.beta_max_sir - der.beta_min_sir) /
                      (cfg.policy.quantization_levels - 1);
  for (int k = 0; k < cfg.policy.quantization_levels; ++k) {
    grid[k] = der.beta_min_sir + k * step;
  }
  m["derived"] = {{"gamma_eff", der.gamma_eff},
                  {"beta_max_sir", der.beta_max_sir},
                  {"beta_min_sir", der.beta_min_sir},
                  {"i0", der.i0},
                  {"i_bar0", der.i_bar0},
                  {"i_th_ref", der.i_th_ref},
                  {"beta_bar", der.reference.beta_bar},
                  {"beta_grid_sir", grid}};
  return m;
}

struct CommonFlags {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_scenario_flag(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--scenario", flags.scenario_path,
                  "Scenario JSON file (defaults to the built-in codogno "
                  "scenario)");
}

void add_seed_flag(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed,
                  "Master seed; required unless the scenario sets "
                  "master_seed");
}

int cmd_optimal_beta(double i0, double i_th, double gamma, double eps) {
  const FlatteningProblem prob{i0, i_th, gamma};
  validate(prob);
  const double beta = optimal_beta(prob);
  const bool ok = verify_optimality(prob, beta, eps);
  std::printf("beta = %.12g\n", beta);
  std::printf("lambert_argument = %.12g\n", lambert_argument(prob));
  std::printf("verified = %s\n", ok ? "true" : "false");
  return ok ? 0 : 1;
}

int cmd_simulate_ode(const CommonFlags& flags) {
  const ScenarioConfig cfg = load_or_default(flags.scenario_path);
  const OdeDemoConfig& d = cfg.ode_demo;
  if (d.horizon_days <= 0.0) {
    write_file(flags.out, "t,s,i,s_bar,i_bar,beta\n");
    return 0;
  }
  const ReferenceTrajectory ref =
      reference_trajectory(d.i_bar0, d.i_threshold, d.gamma, d.horizon_days);
  const ControllerGains gains{d.gain_infected, d.gain_susceptible, d.si_floor,
                              d.beta_min_fraction * d.beta_max, d.beta_max};
  const Trajectory traj = simulate_tracking({1.0 - d.i0, d.i0}, ref, gains,
                                            d.gamma, d.horizon_days);
  write_file(flags.out, tracking_csv(traj, ref));
  return 0;
}

int cmd_simulate_network(const CommonFlags& flags,
                         const std::optional<double>& beta_n_override) {
  const ScenarioConfig cfg = load_or_default(flags.scenario_path);
  const std::uint64_t seed = resolve_seed(flags.seed, cfg);
  const Network net = erdos_renyi(
      cfg.network.n, cfg.network.edge_probability(),
      derive_seed(seed, 0, std::uint64_t(StreamPurpose::network)));
  const double beta_n =
      beta_n_override.value_or(cfg.epidemic.transmission_rate_max);
  SeirdParams params{beta_n,
                     cfg.epidemic.incubation_rate,
                     cfg.epidemic.removal_rate,
                     cfg.epidemic.death_prob_low,
                     cfg.epidemic.death_prob_high,
                     cfg.epidemic.capacity_threshold};
  const SimRun run =
      run_seird(net, params, [beta_n](int) { return beta_n; },
                cfg.horizon_days, seed, cfg.epidemic.initial_infected);
  write_file(flags.out, sim_run_csv(run));
  return 0;
}

int cmd_run_scenario(CommonFlags& flags, const std::optional<int>& runs,
                     const std::optional<double>& delay,
                     const std::optional<int>& update,
                     const std::optional<std::string>& mode, bool serial) {
  ScenarioConfig cfg = load_or_default(flags.scenario_path);
  if (runs) cfg.runs = *runs;
  if (delay) cfg.measurement.delay_mean = *delay;
  if (update) cfg.policy.update_interval = *update;
  if (mode) cfg.mode = reference_mode_from_string(*mode);
  const std::uint64_t seed = resolve_seed(flags.seed, cfg);
  cfg.master_seed = seed;
  validate(cfg);

  const fs::path out_dir(flags.out);
  fs::create_directories(out_dir / "runs");
  const ScenarioDerived der = derive_scenario(cfg);
  const EnsembleResult ens = run_monte_carlo(cfg, seed, !serial);

  for (int r = 0; r < cfg.runs; ++r) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%03d.csv", r);
    write_file(out_dir / "runs" / name, run_result_csv(ens.controlled[r]));
  }
  write_file(out_dir / "ensemble.csv", ensemble_csv(ens.series));

  std::string summary = "metric,mean,q1,q3\n";
  const auto row = [&summary](const char* name, const MetricSummary& s) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g\n", name, s.mean,
                  s.q1, s.q3);
    summary += buf;
  };
  row("death_reduction", ens.death_reduction);
  row("beta_reduction", ens.beta_reduction);
  row("peak_i", ens.peak_i);
  row("frac_days_above", ens.frac_days_above);
  row("final_deaths", ens.final_deaths);
  write_file(out_dir / "summary.csv", summary);
  write_file(out_dir / "metadata.json", metadata_json(cfg, seed, der).dump(2) + "\n");

  std::printf("runs = %d\n", cfg.runs);
  std::printf("mean death reduction vs uncontrolled = %.4f\n",
              ens.death_reduction.mean);
  std::printf("mean beta reduction vs 60-day lockdown = %.4f\n",
              ens.beta_reduction.mean);
  return 0;
}

int cmd_sweep(CommonFlags& flags, const std::optional<int>& runs, bool serial) {
  ScenarioConfig cfg = load_or_default(flags.scenario_path);
  if (runs) cfg.runs = *runs;
  const std::uint64_t seed = resolve_seed(flags.seed, cfg);
  cfg.master_seed = seed;
  validate(cfg);

  const fs::path out_dir(flags.out);
  fs::create_directories(out_dir);
  const SweepResult sw =
      sweep(cfg, seed, {3.0, 7.0, 20.0}, {1, 7, 15},
            {ReferenceMode::mismatched, ReferenceMode::matched}, !serial);

  write_file(out_dir / "sweep.csv", sweep_csv(sw));
  for (const SweepCell& cell : sw.cells) {
    char name[80];
    std::snprintf(name, sizeof(name), "ensemble_delay%g_update%d_%s.csv",
                  cell.delay_mean, cell.update_interval, to_string(cell.mode));
    write_file(out_dir / name, ensemble_csv(cell.series));
  }
  const ScenarioDerived der = derive_scenario(cfg);
  write_file(out_dir / "metadata.json", metadata_json(cfg, seed, der).dump(2) + "\n");
  std::printf("cells = %zu\n", sw.cells.size());
  return 0;
}

int cmd_export_network(const CommonFlags& flags) {
  const ScenarioConfig cfg = load_or_default(flags.scenario_path);
  const std::uint64_t seed = resolve_seed(flags.seed, cfg);
  const Network net = erdos_renyi(
      cfg.network.n, cfg.network.edge_probability(),
      derive_seed(seed, 0, std::uint64_t(StreamPurpose::network)));
  std::ofstream out(flags.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + flags.out);
  net.write_edge_list(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Closed-loop epidemic control: closed-form curve flattening, "
      "trajectory-tracking feedback, and stochastic network validation"};
  app.require_subcommand(1);

  // optimal-beta
  double i0 = 0.0, i_th = 0.0, gamma = 0.0, eps = 1e-3;
  auto* ob = app.add_subcommand(
      "optimal-beta", "Closed-form optimal distancing level for the SIR flow");
  ob->add_option("--i0", i0, "Initial infected fraction")->required();
  ob->add_option("--ith", i_th, "Health-care capacity (infected fraction)")
      ->required();
  ob->add_option("--gamma", gamma, "Recovery rate (1/day)")->required();
  ob->add_option("--eps", eps, "Verification tolerance");

  // simulate-ode
  CommonFlags ode_flags;
  auto* ode = app.add_subcommand(
      "simulate-ode", "Deterministic closed-loop tracking demo (CSV series)");
  add_scenario_flag(ode, ode_flags);
  ode->add_option("--out", ode_flags.out, "Output CSV path")->required();

  // simulate-network
  CommonFlags net_flags;
  std::optional<double> beta_n_override;
  auto* net = app.add_subcommand(
      "simulate-network",
      "One stochastic SEIRD realization at a fixed transmission rate");
  add_scenario_flag(net, net_flags);
  add_seed_flag(net, net_flags);
  net->add_option("--beta-n", beta_n_override,
                  "Constant per-link transmission rate (defaults to the "
                  "scenario maximum)");
  net->add_option("--out", net_flags.out, "Output CSV path")->required();

  // run-scenario
  CommonFlags run_flags;
  std::optional<int> run_runs, run_update;
  std::optional<double> run_delay;
  std::optional<std::string> run_mode;
  bool run_serial = false;
  auto* rs = app.add_subcommand(
      "run-scenario", "Closed-loop Monte Carlo ensemble with baselines");
  add_scenario_flag(rs, run_flags);
  add_seed_flag(rs, run_flags);
  rs->add_option("--runs", run_runs, "Monte Carlo run count");
  rs->add_option("--delay", run_delay, "Mean measurement delay (days)");
  rs->add_option("--update", run_update, "Policy update interval (days)");
  rs->add_option("--mode", run_mode, "Reference mode: matched|mismatched");
  rs->add_flag("--serial", run_serial, "Use the serial reference path");
  rs->add_option("--out", run_flags.out, "Output directory")->required();

  // sweep
  CommonFlags sweep_flags;
  std::optional<int> sweep_runs;
  bool sweep_serial = false;
  auto* sw = app.add_subcommand(
      "sweep",
      "Full delay x update x mode grid of ensembles (heat-map table)");
  add_scenario_flag(sw, sweep_flags);
  add_seed_flag(sw, sweep_flags);
  sw->add_option("--runs", sweep_runs, "Monte Carlo runs per cell");
  sw->add_flag("--serial", sweep_serial, "Use the serial reference path");
  sw->add_option("--out", sweep_flags.out, "Output directory")->required();

  // export-network
  CommonFlags exp_flags;
  auto* ex = app.add_subcommand(
      "export-network", "Write the run-0 network as a sorted edge list");
  add_scenario_flag(ex, exp_flags);
  add_seed_flag(ex, exp_flags);
  ex->add_option("--out", exp_flags.out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ob->parsed()) return cmd_optimal_beta(i0, i_th, gamma, eps);
    if (ode->parsed()) return cmd_simulate_ode(ode_flags);
    if (net->parsed()) return cmd_simulate_network(net_flags, beta_n_override);
    if (rs->parsed()) {
      return cmd_run_scenario(run_flags, run_runs, run_delay, run_update,
                              run_mode, run_serial);
    }
    if (sw->parsed()) return cmd_sweep(sweep_flags, sweep_runs, sweep_serial);
    if (ex->parsed()) return cmd_export_network(exp_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
