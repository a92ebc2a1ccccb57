#include "avtrack/airsim/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "avtrack/constants.hpp"
#include "avtrack/random.hpp"

namespace avtrack::airsim {

namespace {

enum Purpose : std::uint64_t { kClock = 1, kLink = 2, kJitter = 3 };

std::uint64_t tx_key(int av_id, std::int64_t k) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(av_id)) << 32) ^
         static_cast<std::uint64_t>(k);
}

double quantize(double t, double rate) { return std::floor(t * rate) / rate; }

}  // namespace

Dataset simulate_dataset(const Scenario& scenario) {
  scenario.validate();
  Dataset out;
  const std::uint64_t seed = scenario.rng_seed;

  // Clock traces cover the whole run plus a margin for propagation delay.
  const double step = scenario.clock_grid_step;
  const auto n_grid = static_cast<std::size_t>(std::ceil((scenario.duration + 1.0) / step)) + 1;
  std::vector<double> grid(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) grid[i] = static_cast<double>(i) * step;
  for (const auto& rx : scenario.receivers) {
    if (rx.kind != ReceiverKind::SN) continue;
    Rng rng = derived_rng(seed, kClock, static_cast<std::uint64_t>(rx.id));
    out.clocks.emplace(rx.id, ClockTrace(0.0, step, simulate_clock(rx.clock, grid, rng)));
  }

  std::vector<Eigen::Vector3d> rx_ecef;
  std::vector<Eigen::Matrix3d> rx_rot;
  for (const auto& rx : scenario.receivers) {
    rx_ecef.push_back(geo::geodetic_to_ecef(rx.position));
    rx_rot.push_back(geo::ecef_to_enu_rotation(rx.position));
  }
  std::vector<std::size_t> rx_order(scenario.receivers.size());
  for (std::size_t i = 0; i < rx_order.size(); ++i) rx_order[i] = i;
  std::sort(rx_order.begin(), rx_order.end(), [&](std::size_t a, std::size_t b) {
    return scenario.receivers[a].id < scenario.receivers[b].id;
  });

  for (const auto& tr : scenario.trajectories) {
    const double t_begin = tr.waypoints.front().t + tr.first_broadcast;
    const double t_end = std::min(tr.waypoints.back().t, scenario.duration);
    for (std::int64_t k = 0;; ++k) {
      const double t = t_begin + static_cast<double>(k) * tr.broadcast_period;
      if (t > t_end) break;
      if (t < 0.0) continue;
      const geo::GeodeticPosition av = tr.position_at(t);
      out.truth.push_back({tr.av_id, k, t, av});
      const Eigen::Vector3d av_ecef = geo::geodetic_to_ecef(av);
      const std::uint64_t key = tx_key(tr.av_id, k);

      BroadcastRecord rec;
      rec.server_time = t + scenario.server_latency;
      rec.av_id = tr.av_id;
      rec.trusted = tr.trusted;
      for (std::size_t i : rx_order) {
        const Receiver& rx = scenario.receivers[i];
        const Eigen::Vector3d diff = av_ecef - rx_ecef[i];
        const Eigen::Vector3d local = rx_rot[i] * diff;
        if (local.z() < 0.0) continue;  // below the receiver's horizon
        const double theta = geo::elevation_angle({0.0, 0.0, 0.0}, geo::CartesianPosition::from(local));
        const double p_los = los_probability(theta, scenario.channel.a0, scenario.channel.b0);
        const auto rx_key = static_cast<std::uint64_t>(rx.id);
        const LinkKind link = hash_uniform(seed, kLink, key, rx_key) < p_los ? LinkKind::LoS
                                                                             : LinkKind::NLoS;
        const double d = diff.norm();
        if (!link_closes(d, link, scenario.channel)) continue;

        const double arrival = t + d / kSpeedOfLight;
        double toa = arrival + scenario.toa_jitter_std * hash_normal(seed, kJitter, key, rx_key);
        if (rx.kind == ReceiverKind::SN) toa -= out.clocks.at(rx.id).offset_at(arrival);
        if (scenario.quantize_toa) toa = quantize(toa, rx.sampling_rate);
        rec.receptions.push_back({rx.id, rx.position, toa, rx.kind});
      }
      if (!rec.receptions.empty()) out.records.push_back(std::move(rec));
    }
  }

  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const BroadcastRecord& a, const BroadcastRecord& b) {
                     if (a.server_time != b.server_time) return a.server_time < b.server_time;
                     return a.av_id < b.av_id;
                   });
  std::stable_sort(out.truth.begin(), out.truth.end(), [](const TruthRow& a, const TruthRow& b) {
    if (a.av_id != b.av_id) return a.av_id < b.av_id;
    return a.index < b.index;
  });
  return out;
}

}  // namespace avtrack::airsim
