#pragma once

#include <map>
#include <vector>

#include "avtrack/airsim/clock.hpp"
#include "avtrack/airsim/scenario.hpp"
#include "avtrack/records.hpp"

namespace avtrack::airsim {

struct Dataset {
  std::vector<BroadcastRecord> records;  // ordered by (server_time, av_id)
  std::vector<TruthRow> truth;           // every transmission, ordered by (av_id, index)
  std::map<int, ClockTrace> clocks;      // true offset per SN receiver id
};

/// Runs the scenario: per transmission and receiver, draws the link class,
/// applies the link budget, then timestamps
///   toa = emission + distance / c - eta(arrival) + jitter
/// on the receiver's local clock, floored to its sampling grid.
Dataset simulate_dataset(const Scenario& scenario);

}  // namespace avtrack::airsim
