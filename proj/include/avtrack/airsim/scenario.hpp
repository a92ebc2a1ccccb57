#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "avtrack/airsim/channel.hpp"
#include "avtrack/airsim/clock.hpp"
#include "avtrack/records.hpp"

namespace avtrack::airsim {

struct Receiver {
  int id = 0;
  geo::GeodeticPosition position;
  ReceiverKind kind = ReceiverKind::GSN;
  double sampling_rate = 50e6;  // Hz, timestamp resolution
  ClockParams clock;            // ignored for GSN receivers
};

struct Waypoint {
  double t = 0.0;
  geo::GeodeticPosition position;
};

struct Trajectory {
  int av_id = 0;
  std::vector<Waypoint> waypoints;  // strictly increasing t
  double broadcast_period = 1.0;
  double first_broadcast = 0.0;  // offset of the first broadcast after waypoints[0].t
  bool trusted = true;

  /// Linear interpolation of latitude, longitude and altitude.
  geo::GeodeticPosition position_at(double t) const;
};

struct Scenario {
  std::vector<Receiver> receivers;
  std::vector<Trajectory> trajectories;
  ChannelParams channel;
  double duration = 3600.0;
  std::uint64_t rng_seed = 1;
  double toa_jitter_std = 0.0;   // s, per-reception timestamp noise
  double server_latency = 0.2;   // s, server_time minus emission time
  double clock_grid_step = 1.0;  // s, resolution of the simulated SN clock traces
  bool quantize_toa = true;      // floor ToAs to each receiver's sampling grid

  /// Throws std::invalid_argument on an inconsistent scenario.
  void validate() const;
  const Receiver& receiver(int id) const;
};

inline constexpr double kGsnSamplingRate = 50e6;
inline constexpr double kSnSamplingRate = 12e6;

/// Built-in scenarios: "default" (2 GSN / 2 SN), "gsn1sn3", "gsn3sn1",
/// "parallel", "perpendicular", "all-gsn". Throws on unknown names.
Scenario make_preset(std::string_view name, std::uint64_t seed);
std::vector<std::string> preset_names();

/// Every receiver becomes a synchronized GSN at the GSN resolution. Geometry,
/// traffic and seed are kept so link draws are identical to the source scenario.
Scenario to_all_gsn(Scenario s);

/// First `n_gsn` receivers (by list order) become GSN, the rest SN with the
/// stock drifting clock.
Scenario with_composition(Scenario s, int n_gsn);

/// Drifting two-regime clock used for SN receivers in the presets.
ClockParams default_sn_clock(int rx_index, std::uint64_t seed);

}  // namespace avtrack::airsim
