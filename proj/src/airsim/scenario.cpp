#include "avtrack/airsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace avtrack::airsim {

geo::GeodeticPosition Trajectory::position_at(double t) const {
  if (waypoints.empty()) throw std::logic_error("trajectory has no waypoints");
  if (t <= waypoints.front().t) return waypoints.front().position;
  if (t >= waypoints.back().t) return waypoints.back().position;
  auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                             [](double v, const Waypoint& w) { return v < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double f = (t - a.t) / (b.t - a.t);
  return {a.position.latitude + f * (b.position.latitude - a.position.latitude),
          a.position.longitude + f * (b.position.longitude - a.position.longitude),
          a.position.altitude + f * (b.position.altitude - a.position.altitude)};
}

void Scenario::validate() const {
  if (receivers.empty()) throw std::invalid_argument("scenario has no receivers");
  if (!(duration > 0.0)) throw std::invalid_argument("scenario duration must be > 0");
  if (!(toa_jitter_std >= 0.0)) throw std::invalid_argument("toa_jitter_std must be >= 0");
  if (!(clock_grid_step > 0.0)) throw std::invalid_argument("clock_grid_step must be > 0");
  channel.validate();
  std::set<int> ids;
  for (const auto& r : receivers) {
    if (!ids.insert(r.id).second)
      throw std::invalid_argument("duplicate receiver id " + std::to_string(r.id));
    r.position.validate();
    if (!(r.sampling_rate > 0.0)) throw std::invalid_argument("sampling_rate must be > 0");
    if (r.kind == ReceiverKind::SN) r.clock.validate();
  }
  std::set<int> avs;
  for (const auto& tr : trajectories) {
    if (!avs.insert(tr.av_id).second)
      throw std::invalid_argument("duplicate av_id " + std::to_string(tr.av_id));
    if (!(tr.broadcast_period > 0.0)) throw std::invalid_argument("broadcast_period must be > 0");
    if (tr.waypoints.empty()) throw std::invalid_argument("trajectory without waypoints");
    for (std::size_t i = 0; i < tr.waypoints.size(); ++i) {
      tr.waypoints[i].position.validate();
      if (i > 0 && !(tr.waypoints[i].t > tr.waypoints[i - 1].t))
        throw std::invalid_argument("waypoint times must be strictly increasing");
    }
  }
}

const Receiver& Scenario::receiver(int id) const {
  for (const auto& r : receivers)
    if (r.id == id) return r;
  throw std::out_of_range("no receiver with id " + std::to_string(id));
}

namespace {

const geo::GeodeticPosition kCenter{50.85, 4.35, 0.0};

geo::GeodeticPosition enu(double e, double n, double u) {
  return geo::local_to_geodetic({e, n, u}, kCenter);
}

Trajectory straight(int av_id, bool trusted, double t0, double t1, Eigen::Vector3d from,
                    Eigen::Vector3d to, double first = 0.0) {
  Trajectory tr;
  tr.av_id = av_id;
  tr.trusted = trusted;
  tr.broadcast_period = 1.0;
  tr.first_broadcast = first;
  // Intermediate waypoints keep the geodetic interpolation close to a straight ENU line.
  constexpr int kSegments = 8;
  for (int i = 0; i <= kSegments; ++i) {
    const double f = static_cast<double>(i) / kSegments;
    const Eigen::Vector3d p = from + f * (to - from);
    tr.waypoints.push_back({t0 + f * (t1 - t0), enu(p.x(), p.y(), p.z())});
  }
  return tr;
}

// Receivers laid out along a shallow west-east curve at differing terrain heights.
// The list order puts two interleaved sites first so `with_composition(.., 2)` makes
// the outer-west and inner-east sites the GSNs.
std::vector<Receiver> base_receivers() {
  std::vector<Receiver> rx(4);
  rx[0].id = 11; rx[0].position = enu(-30000.0, -4000.0, 60.0);
  rx[1].id = 13; rx[1].position = enu(11000.0, -5000.0, 180.0);
  rx[2].id = 12; rx[2].position = enu(-9000.0, 6000.0, 420.0);
  rx[3].id = 14; rx[3].position = enu(31000.0, 5000.0, 850.0);
  return rx;
}

// Trusted traffic: short passes through coverage, one every four minutes, so
// co-receptions come in bursts of about 90 s separated by quiet spells.
std::vector<Trajectory> trusted_traffic(double duration) {
  std::vector<Trajectory> out;
  constexpr double kPi = 3.14159265358979323846;
  const double v = 230.0, pass = 90.0, every = 240.0;
  int id = 4001;
  for (int k = 0; 30.0 + every * k + pass <= duration; ++k) {
    const double ang = k * 137.5 * kPi / 180.0;
    const Eigen::Vector3d radial{std::cos(ang), std::sin(ang), 0.0};
    const Eigen::Vector3d heading{-radial.y(), radial.x(), 0.0};
    const Eigen::Vector3d mid = 25e3 * radial + Eigen::Vector3d{0.0, 0.0, 9500.0 + 250.0 * (k % 6)};
    const double t0 = 30.0 + every * k;
    out.push_back(straight(id++, true, t0, t0 + pass, mid - 0.5 * pass * v * heading,
                           mid + 0.5 * pass * v * heading, 0.25));
  }
  return out;
}

Scenario base_scenario(std::uint64_t seed) {
  Scenario s;
  s.rng_seed = seed;
  s.duration = 3600.0;
  s.receivers = base_receivers();
  s.trajectories = trusted_traffic(s.duration);
  // Suburban air-to-ground constants.
  s.channel.a0 = 4.88;
  s.channel.b0 = 0.43;
  s.channel.mu_los = 0.1;
  s.channel.mu_nlos = 21.0;
  s.toa_jitter_std = 20e-9;
  return s;
}

void add_default_targets(Scenario& s) {
  const double v = 220.0;
  struct Leg { int id; double t0; Eigen::Vector3d a, b; };
  const Leg legs[] = {
      {630, 1300.0, {-32e3, 6e3, 9500.0}, {32e3, 1e3, 9500.0}},
      {1033, 1650.0, {4e3, -30e3, 10200.0}, {-4e3, 30e3, 10200.0}},
      {1207, 2000.0, {30e3, -12e3, 8800.0}, {-30e3, 12e3, 8800.0}},
      {1519, 2350.0, {-28e3, -20e3, 10800.0}, {28e3, 20e3, 10800.0}},
      {1744, 2700.0, {25e3, 18e3, 9900.0}, {-25e3, -18e3, 9900.0}},
      {1862, 3050.0, {-20e3, 25e3, 10400.0}, {20e3, -25e3, 10400.0}},
  };
  for (const auto& l : legs) {
    const double len = (l.b - l.a).norm();
    s.trajectories.push_back(straight(l.id, false, l.t0, l.t0 + len / v, l.a, l.b, 0.6));
  }
}

void add_line_targets(Scenario& s, bool parallel) {
  const double v = 220.0;
  for (int i = 0; i < 3; ++i) {
    const double t0 = 1300.0 + 750.0 * i;
    const double alt = 9500.0 + 500.0 * i;
    Eigen::Vector3d a, b;
    if (parallel) {
      a = {-55e3, 32e3, alt};
      b = {55e3, 32e3, alt};
    } else {
      a = {0.0, -55e3, alt};
      b = {0.0, 55e3, alt};
    }
    if (i % 2 == 1) std::swap(a, b);
    const double len = (b - a).norm();
    s.trajectories.push_back(straight(700 + i, false, t0, t0 + len / v, a, b, 0.6));
  }
}

}  // namespace

ClockParams default_sn_clock(int rx_index, std::uint64_t seed) {
  static constexpr double kInitial[] = {2.7e-6, -4.1e-6, 1.3e-6, -2.2e-6};
  ClockParams c;
  c.initial_offset = kInitial[static_cast<std::size_t>(rx_index) % 4];
  c.servo_gain = 1.0 / 7200.0;
  c.skew_regimes = {
      SkewRegime{-1.5e-9, 1.0e-9, 21600.0},
      SkewRegime{+2.0e-9, 1.0e-9, 21600.0},
  };
  c.regime_switch_seed = splitmix64(seed * 131 + static_cast<std::uint64_t>(rx_index));
  return c;
}

Scenario with_composition(Scenario s, int n_gsn) {
  for (std::size_t i = 0; i < s.receivers.size(); ++i) {
    Receiver& r = s.receivers[i];
    if (static_cast<int>(i) < n_gsn) {
      r.kind = ReceiverKind::GSN;
      r.sampling_rate = kGsnSamplingRate;
      r.clock = ClockParams{};
    } else {
      r.kind = ReceiverKind::SN;
      r.sampling_rate = kSnSamplingRate;
      r.clock = default_sn_clock(static_cast<int>(i), s.rng_seed);
    }
  }
  return s;
}

Scenario to_all_gsn(Scenario s) {
  for (auto& r : s.receivers) {
    r.kind = ReceiverKind::GSN;
    r.sampling_rate = kGsnSamplingRate;
  }
  return s;
}

std::vector<std::string> preset_names() {
  return {"default", "gsn1sn3", "gsn3sn1", "parallel", "perpendicular", "all-gsn"};
}

Scenario make_preset(std::string_view name, std::uint64_t seed) {
  Scenario s = base_scenario(seed);
  if (name == "default" || name == "all-gsn") {
    add_default_targets(s);
    s = with_composition(std::move(s), 2);
    if (name == "all-gsn") s = to_all_gsn(std::move(s));
  } else if (name == "gsn1sn3" || name == "gsn3sn1") {
    add_default_targets(s);
    s = with_composition(std::move(s), name == "gsn1sn3" ? 1 : 3);
  } else if (name == "parallel" || name == "perpendicular") {
    add_line_targets(s, name == "parallel");
    s = with_composition(std::move(s), 2);
  } else {
    throw std::invalid_argument("unknown scenario preset '" + std::string(name) + "'");
  }
  return s;
}

}  // namespace avtrack::airsim
