#include "avtrack/pipeline/sweep.hpp"

namespace avtrack::pipeline {

std::vector<RunReport> run_cases_serial(const std::vector<SweepCase>& cases) {
  std::vector<RunReport> out;
  for (const auto& c : cases) out.push_back(run(c.config, c.data->records, c.data->truth));
  return out;
}

std::vector<RunReport> run_cases(const std::vector<SweepCase>& cases) {
  std::vector<RunReport> out(cases.size());
  const auto n = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const auto& c = cases[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = run(c.config, c.data->records, c.data->truth);
  }
  return out;
}

ModeSweep sweep_modes(const airsim::Scenario& scenario, const RunConfig& base,
                      const std::vector<SyncMode>& modes) {
  ModeSweep s;
  s.mixed = airsim::simulate_dataset(scenario);
  bool need_twin = false;
  for (auto m : modes) need_twin |= m == SyncMode::Gsn;
  if (need_twin) s.all_gsn = airsim::simulate_dataset(airsim::to_all_gsn(scenario));
  for (auto m : modes) {
    SweepCase c;
    c.label = std::string(to_string(m));
    c.config = base;
    c.config.mode = m;
    c.data = m == SyncMode::Gsn ? &s.all_gsn : &s.mixed;
    s.cases.push_back(std::move(c));
  }
  s.reports = run_cases(s.cases);
  return s;
}

}  // namespace avtrack::pipeline
