#pragma once

#include <string>
#include <string_view>

#include "avtrack/airsim/scenario.hpp"

namespace avtrack::airsim {

// Scenario files are `key = value` lines under a `# avtrack-scenario v1` header.
// Top-level keys set run-wide fields (duration, seed, toa_jitter_std,
// server_latency, clock_grid_step, quantize_toa, channel.*). Each `[receiver]`
// or `[trajectory]` line opens a new entry; `clock.regime = skew noise dwell`
// and `waypoint = t lat lon alt` may repeat. `#` starts a comment.

inline constexpr std::string_view kScenarioHeader = "# avtrack-scenario v1";

std::string format_scenario(const Scenario& s);

/// Throws text::ParseError on syntax errors and std::invalid_argument if the
/// parsed scenario fails validation.
Scenario parse_scenario(std::string_view text);

}  // namespace avtrack::airsim
