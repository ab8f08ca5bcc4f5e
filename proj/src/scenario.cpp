#include "flatten/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace flatten {

using nlohmann::json;

const char* to_string(ReferenceMode mode) {
  return mode == ReferenceMode::matched ? "matched" : "mismatched";
}

ReferenceMode reference_mode_from_string(const std::string& s) {
  if (s == "matched") return ReferenceMode::matched;
  if (s == "mismatched") return ReferenceMode::mismatched;
  throw std::invalid_argument("mode must be 'matched' or 'mismatched', got '" +
                              s + "'");
}

ScenarioConfig default_codogno() { return ScenarioConfig{}; }

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void from_json_into(const json& j, ScenarioConfig& cfg) {
  read(j, "name", cfg.name);
  if (j.contains("network")) {
    const json& n = j.at("network");
    read(n, "n", cfg.network.n);
    read(n, "mean_degree", cfg.network.mean_degree);
  }
  if (j.contains("epidemic")) {
    const json& e = j.at("epidemic");
    read(e, "transmission_rate_max", cfg.epidemic.transmission_rate_max);
    read(e, "incubation_rate", cfg.epidemic.incubation_rate);
    read(e, "removal_rate", cfg.epidemic.removal_rate);
    read(e, "death_prob_low", cfg.epidemic.death_prob_low);
    read(e, "death_prob_high", cfg.epidemic.death_prob_high);
    read(e, "capacity_threshold", cfg.epidemic.capacity_threshold);
    read(e, "initial_infected", cfg.epidemic.initial_infected);
  }
  read(j, "horizon_days", cfg.horizon_days);
  if (j.contains("controller")) {
    const json& c = j.at("controller");
    read(c, "gain_infected", cfg.controller.gain_infected);
    read(c, "gain_susceptible", cfg.controller.gain_susceptible);
    read(c, "si_floor", cfg.controller.si_floor);
  }
  if (j.contains("mode")) {
    cfg.mode = reference_mode_from_string(j.at("mode").get<std::string>());
  }
  if (j.contains("measurement")) {
    const json& m = j.at("measurement");
    read(m, "delay_mean", cfg.measurement.delay_mean);
    read(m, "delay_std", cfg.measurement.delay_std);
    read(m, "noise_std", cfg.measurement.noise_std);
  }
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    read(p, "update_interval", cfg.policy.update_interval);
    read(p, "quantization_levels", cfg.policy.quantization_levels);
    read(p, "beta_min_fraction", cfg.policy.beta_min_fraction);
  }
  read(j, "runs", cfg.runs);
  if (j.contains("master_seed") && !j.at("master_seed").is_null()) {
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  if (j.contains("ode_demo")) {
    const json& o = j.at("ode_demo");
    OdeDemoConfig& d = cfg.ode_demo;
    read(o, "gamma", d.gamma);
    read(o, "beta_max", d.beta_max);
    read(o, "beta_min_fraction", d.beta_min_fraction);
    read(o, "i0", d.i0);
    read(o, "i_bar0", d.i_bar0);
    read(o, "i_threshold", d.i_threshold);
    read(o, "horizon_days", d.horizon_days);
    read(o, "gain_infected", d.gain_infected);
    read(o, "gain_susceptible", d.gain_susceptible);
    read(o, "si_floor", d.si_floor);
  }
  read(j, "hospitalization_rate", cfg.hospitalization_rate);
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["network"] = {{"n", cfg.network.n},
                  {"mean_degree", cfg.network.mean_degree}};
  j["epidemic"] = {
      {"transmission_rate_max", cfg.epidemic.transmission_rate_max},
      {"incubation_rate", cfg.epidemic.incubation_rate},
      {"removal_rate", cfg.epidemic.removal_rate},
      {"death_prob_low", cfg.epidemic.death_prob_low},
      {"death_prob_high", cfg.epidemic.death_prob_high},
      {"capacity_threshold", cfg.epidemic.capacity_threshold},
      {"initial_infected", cfg.epidemic.initial_infected}};
  j["horizon_days"] = cfg.horizon_days;
  j["controller"] = {{"gain_infected", cfg.controller.gain_infected},
                     {"gain_susceptible", cfg.controller.gain_susceptible},
                     {"si_floor", cfg.controller.si_floor}};
  j["mode"] = to_string(cfg.mode);
  j["measurement"] = {{"delay_mean", cfg.measurement.delay_mean},
                      {"delay_std", cfg.measurement.delay_std},
                      {"noise_std", cfg.measurement.noise_std}};
  j["policy"] = {{"update_interval", cfg.policy.update_interval},
                 {"quantization_levels", cfg.policy.quantization_levels},
                 {"beta_min_fraction", cfg.policy.beta_min_fraction}};
  j["runs"] = cfg.runs;
  if (cfg.master_seed) {
    j["master_seed"] = *cfg.master_seed;
  } else {
    j["master_seed"] = nullptr;
  }
  const OdeDemoConfig& d = cfg.ode_demo;
  j["ode_demo"] = {{"gamma", d.gamma},
                   {"beta_max", d.beta_max},
                   {"beta_min_fraction", d.beta_min_fraction},
                   {"i0", d.i0},
                   {"i_bar0", d.i_bar0},
                   {"i_threshold", d.i_threshold},
                   {"horizon_days", d.horizon_days},
                   {"gain_infected", d.gain_infected},
                   {"gain_susceptible", d.gain_susceptible},
                   {"si_floor", d.si_floor}};
  j["hospitalization_rate"] = cfg.hospitalization_rate;
  return j;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  ScenarioConfig cfg;
  try {
    const json j = json::parse(in);  // parse errors carry line/column
    from_json_into(j, cfg);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  validate(cfg);
  return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg, int indent) {
  return to_json(cfg).dump(indent);
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.network.n < 2) {
    throw std::invalid_argument("scenario: network.n must be >= 2");
  }
  if (!(cfg.network.mean_degree >= 0.0) ||
      cfg.network.mean_degree > cfg.network.n - 1) {
    throw std::invalid_argument("scenario: mean_degree out of range");
  }
  const EpidemicConfig& e = cfg.epidemic;
  if (!(e.transmission_rate_max > 0.0) || !(e.incubation_rate > 0.0) ||
      !(e.removal_rate > 0.0)) {
    throw std::invalid_argument("scenario: epidemic rates must be > 0");
  }
  if (!(0.0 <= e.death_prob_low && e.death_prob_low <= e.death_prob_high &&
        e.death_prob_high <= 1.0)) {
    throw std::invalid_argument(
        "scenario: need 0 <= death_prob_low <= death_prob_high <= 1");
  }
  if (!(e.capacity_threshold > 0.0) || !(e.capacity_threshold < 1.0)) {
    throw std::invalid_argument("scenario: capacity_threshold must be in (0,1)");
  }
  if (e.initial_infected == 0 || e.initial_infected >= cfg.network.n) {
    throw std::invalid_argument(
        "scenario: need 0 < initial_infected < network.n");
  }
  if (cfg.horizon_days < 1) {
    throw std::invalid_argument("scenario: horizon_days must be >= 1");
  }
  if (!(cfg.controller.gain_susceptible > 0.0)) {
    throw std::invalid_argument("scenario: gain_susceptible must be > 0");
  }
  if (!(cfg.controller.gain_infected >= 0.0)) {
    throw std::invalid_argument("scenario: gain_infected must be >= 0");
  }
  if (!(cfg.measurement.delay_mean >= 0.0) ||
      !(cfg.measurement.delay_std >= 0.0) ||
      !(cfg.measurement.noise_std >= 0.0)) {
    throw std::invalid_argument("scenario: measurement settings must be >= 0");
  }
  if (cfg.policy.update_interval < 1) {
    throw std::invalid_argument("scenario: update_interval must be >= 1");
  }
  if (cfg.policy.quantization_levels < 2) {
    throw std::invalid_argument("scenario: quantization_levels must be >= 2");
  }
  if (!(cfg.policy.beta_min_fraction > 0.0) ||
      !(cfg.policy.beta_min_fraction < 1.0)) {
    throw std::invalid_argument("scenario: beta_min_fraction must be in (0,1)");
  }
  if (cfg.runs < 1) throw std::invalid_argument("scenario: runs must be >= 1");
  const OdeDemoConfig& d = cfg.ode_demo;
  if (!(d.gamma > 0.0) || !(d.beta_max > 0.0) ||
      !(d.beta_min_fraction > 0.0) || !(d.beta_min_fraction < 1.0)) {
    throw std::invalid_argument("scenario: bad ode_demo rates");
  }
  if (!(d.gain_susceptible > 0.0) || !(d.gain_infected >= 0.0)) {
    throw std::invalid_argument("scenario: bad ode_demo gains");
  }
  if (!(d.i_bar0 > 0.0) || !(d.i_bar0 <= d.i_threshold) ||
      !(d.i_threshold < 1.0) || !(d.i0 > 0.0) || !(d.i0 < 1.0)) {
    throw std::invalid_argument("scenario: bad ode_demo initial conditions");
  }
}

}  // namespace flatten
