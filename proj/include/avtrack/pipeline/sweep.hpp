#pragma once

#include <string>
#include <vector>

#include "avtrack/airsim/dataset.hpp"
#include "avtrack/airsim/scenario.hpp"
#include "avtrack/pipeline/run.hpp"

namespace avtrack::pipeline {

struct SweepCase {
  std::string label;
  const airsim::Dataset* data = nullptr;
  RunConfig config;
};

/// Runs every case; independent cases are spread over OpenMP threads.
std::vector<RunReport> run_cases(const std::vector<SweepCase>& cases);
/// Same results computed one case at a time.
std::vector<RunReport> run_cases_serial(const std::vector<SweepCase>& cases);

struct ModeSweep {
  airsim::Dataset mixed;    // scenario as given
  airsim::Dataset all_gsn;  // same scenario with every receiver synchronised
  std::vector<SweepCase> cases;
  std::vector<RunReport> reports;  // aligned with cases
};

/// Simulates `scenario` and its all-GSN twin, then runs each mode (gsn on the
/// twin, the rest on the mixed dataset) with `base` as the shared config.
ModeSweep sweep_modes(const airsim::Scenario& scenario, const RunConfig& base,
                      const std::vector<SyncMode>& modes);

}  // namespace avtrack::pipeline
