#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace flatten {

struct NetworkConfig {
  std::uint32_t n = 16000;
  double mean_degree = 19.0;

  double edge_probability() const { return mean_degree / (n - 1); }
};

struct EpidemicConfig {
  double transmission_rate_max = 0.0227;  // per-link rate with no distancing
  double incubation_rate = 0.25;
  double removal_rate = 0.1428;
  double death_prob_low = 0.005;
  double death_prob_high = 0.02;
  double capacity_threshold = 0.025;  // fraction of the population
  std::uint32_t initial_infected = 800;
};

struct ControllerConfig {
  double gain_infected = 10.0;
  double gain_susceptible = 0.5;
  double si_floor = 1e-6;
};

struct MeasurementConfig {
  double delay_mean = 3.0;  // days
  double delay_std = 1.0;
  double noise_std = 0.1;  // relative
};

struct PolicyConfig {
  int update_interval = 7;  // days between allowed policy changes
  int quantization_levels = 5;
  double beta_min_fraction = 0.25;  // lockdown level as a fraction of beta_max
};

// Whether the tracked reference starts from the measured outbreak state or
// from the health-care capacity.
enum class ReferenceMode { matched, mismatched };

const char* to_string(ReferenceMode mode);
ReferenceMode reference_mode_from_string(const std::string& s);

// Parameters of the deterministic closed-loop demo (the `simulate-ode`
// subcommand), independent of the network scenario.
struct OdeDemoConfig {
  double gamma = 0.1;
  double beta_max = 0.22;
  double beta_min_fraction = 0.25;
  double i0 = 0.14;
  double i_bar0 = 0.1;
  double i_threshold = 0.12;
  double horizon_days = 400.0;
  double gain_infected = 50.0;
  double gain_susceptible = 20.0;
  double si_floor = 1e-6;
};

struct ScenarioConfig {
  std::string name = "codogno";
  NetworkConfig network;
  EpidemicConfig epidemic;
  int horizon_days = 240;
  ControllerConfig controller;
  ReferenceMode mode = ReferenceMode::mismatched;
  MeasurementConfig measurement;
  PolicyConfig policy;
  int runs = 100;
  std::optional<std::uint64_t> master_seed;  // never defaulted from the clock
  OdeDemoConfig ode_demo;
  double hospitalization_rate = 0.02;  // informational only
};

// The stock scenario: all defaults above.
ScenarioConfig default_codogno();

// Loads a JSON scenario document; unspecified fields keep their defaults.
// Throws std::runtime_error carrying the parser's line/column on bad input.
ScenarioConfig load_scenario(const std::string& path);

// Serialization used for the reproducibility metadata.
std::string scenario_to_json(const ScenarioConfig& cfg, int indent = 2);

// Sanity checks on ranges (update interval >= 1, quantization levels >= 2,
// fraction in (0,1), ...). Throws std::invalid_argument.
void validate(const ScenarioConfig& cfg);

}  // namespace flatten
