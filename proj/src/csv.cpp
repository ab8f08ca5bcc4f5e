#include "flatten/csv.hpp"

#include <cstdio>

namespace flatten {

namespace {

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  out += buf;
}

void append_num(std::string& out, std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
  out += buf;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,s,i,beta\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    append_num(out, traj.times[k]);
    out += ',';
    append_num(out, traj.states[k].s);
    out += ',';
    append_num(out, traj.states[k].i);
    out += ',';
    append_num(out, traj.betas[k]);
    out += '\n';
  }
  return out;
}

std::string tracking_csv(const Trajectory& traj, const ReferenceTrajectory& ref) {
  std::string out = "t,s,i,s_bar,i_bar,beta\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const EpidemicState r = ref.at(traj.times[k]);
    append_num(out, traj.times[k]);
    out += ',';
    append_num(out, traj.states[k].s);
    out += ',';
    append_num(out, traj.states[k].i);
    out += ',';
    append_num(out, r.s);
    out += ',';
    append_num(out, r.i);
    out += ',';
    append_num(out, traj.betas[k]);
    out += '\n';
  }
  return out;
}

namespace {

void append_counts(std::string& out, const CompartmentCounts& c) {
  append_num(out, std::uint64_t(c.susceptible));
  out += ',';
  append_num(out, std::uint64_t(c.exposed));
  out += ',';
  append_num(out, std::uint64_t(c.infected));
  out += ',';
  append_num(out, std::uint64_t(c.recovered));
  out += ',';
  append_num(out, std::uint64_t(c.dead));
}

}  // namespace

std::string sim_run_csv(const SimRun& run) {
  std::string out = "day,S,E,I,R,D,beta_n\n";
  for (const DailyCounts& row : run.daily) {
    append_num(out, std::uint64_t(row.day));
    out += ',';
    append_counts(out, row.counts);
    out += ',';
    append_num(out, row.transmission_rate);
    out += '\n';
  }
  return out;
}

std::string run_result_csv(const RunResult& res) {
  std::string out = "day,S,E,I,R,D,beta_applied,s_meas,i_meas\n";
  for (std::size_t d = 0; d < res.days.size(); ++d) {
    const ClosedLoopDay& row = res.days[d];
    append_num(out, std::uint64_t(d));
    out += ',';
    append_counts(out, row.counts);
    out += ',';
    append_num(out, row.beta_link);
    out += ',';
    append_num(out, row.s_meas);
    out += ',';
    append_num(out, row.i_meas);
    out += '\n';
  }
  return out;
}

std::string ensemble_csv(const EnsembleSeries& series) {
  std::string out = "day,i_mean,i_q1,i_q3,beta_mean,beta_q1,beta_q3\n";
  for (std::size_t d = 0; d < series.i_mean.size(); ++d) {
    append_num(out, std::uint64_t(d));
    out += ',';
    append_num(out, series.i_mean[d]);
    out += ',';
    append_num(out, series.i_q1[d]);
    out += ',';
    append_num(out, series.i_q3[d]);
    out += ',';
    append_num(out, series.beta_mean[d]);
    out += ',';
    append_num(out, series.beta_q1[d]);
    out += ',';
    append_num(out, series.beta_q3[d]);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "delay,update,mode,metric,mean,q1,q3\n";
  const auto emit = [&out](const SweepCell& cell, const char* metric,
                           const MetricSummary& summary) {
    append_num(out, cell.delay_mean);
    out += ',';
    append_num(out, std::uint64_t(cell.update_interval));
    out += ',';
    out += to_string(cell.mode);
    out += ',';
    out += metric;
    out += ',';
    append_num(out, summary.mean);
    out += ',';
    append_num(out, summary.q1);
    out += ',';
    append_num(out, summary.q3);
    out += '\n';
  };
  for (const SweepCell& cell : result.cells) {
    emit(cell, "death_reduction", cell.death_reduction);
    emit(cell, "beta_reduction", cell.beta_reduction);
    emit(cell, "peak_i", cell.peak_i);
    emit(cell, "frac_days_above", cell.frac_days_above);
  }
  return out;
}

}  // namespace flatten
