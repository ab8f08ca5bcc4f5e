#pragma once

#include "flatten/seird_sim.hpp"
#include "flatten/sir_model.hpp"

namespace flatten {

// Rates needed to translate between the network SEIRD process and the
// population-level SIR picture the controller lives in.
struct MapParams {
  double incubation_rate = 0.0;
  double removal_rate = 0.0;
  double mean_degree = 0.0;
};

// Output map: exposed nodes are infected but not yet infectious, so they
// still look susceptible at the population level; only I counts as infected.
inline EpidemicState output_map(const CompartmentCounts& c, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return {(double(c.susceptible) + double(c.exposed)) / nd,
          double(c.infected) / nd};
}

// Rate of the exponential the E->I->out residence time is matched to; its
// reciprocal equals the true mean residence 1/incubation + 1/removal.
inline double effective_gamma(const MapParams& m) {
  return m.incubation_rate * m.removal_rate /
         (m.incubation_rate + m.removal_rate);
}

// Input map: reproduction-number matching between the two models followed by
// the per-link mean-field normalization. Linear in beta.
inline double input_map(double beta_sir, const MapParams& m) {
  return beta_sir * (m.removal_rate + m.incubation_rate) /
         (m.incubation_rate * m.mean_degree);
}

inline double inverse_input_map(double beta_link, const MapParams& m) {
  return beta_link * m.incubation_rate * m.mean_degree /
         (m.removal_rate + m.incubation_rate);
}

// Mean-field closure of the S-I link count. An upper estimate of the true
// count once the epidemic has built up local correlations.
inline double si_links_mean_field(std::uint64_t i_count, std::uint64_t s_count,
                                  std::uint64_t n, double mean_degree) {
  return mean_degree * static_cast<double>(i_count) *
         static_cast<double>(s_count) / static_cast<double>(n);
}

}  // namespace flatten
