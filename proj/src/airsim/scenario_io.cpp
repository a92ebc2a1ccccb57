#include "avtrack/airsim/scenario_io.hpp"

#include "avtrack/text_io.hpp"

namespace avtrack::airsim {

namespace {

using text::format_double;
using text::ParseError;

std::string position_str(const geo::GeodeticPosition& p) {
  return format_double(p.latitude) + ' ' + format_double(p.longitude) + ' ' +
         format_double(p.altitude);
}

std::vector<double> numbers(std::string_view v, std::size_t n, std::size_t line) {
  const auto f = text::split_ws(v);
  if (f.size() != n) throw ParseError(line, "expected " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (auto s : f) out.push_back(text::parse_double(s, line));
  return out;
}

bool parse_flag(std::string_view v, std::size_t line) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ParseError(line, "expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace

std::string format_scenario(const Scenario& s) {
  std::string out(kScenarioHeader);
  out += '\n';
  auto kv = [&](std::string_view k, const std::string& v) {
    out += std::string(k) + " = " + v + '\n';
  };
  kv("duration", format_double(s.duration));
  kv("seed", std::to_string(s.rng_seed));
  kv("toa_jitter_std", format_double(s.toa_jitter_std));
  kv("server_latency", format_double(s.server_latency));
  kv("clock_grid_step", format_double(s.clock_grid_step));
  kv("quantize_toa", s.quantize_toa ? "1" : "0");
  kv("channel.carrier_frequency", format_double(s.channel.carrier_frequency));
  kv("channel.a0", format_double(s.channel.a0));
  kv("channel.b0", format_double(s.channel.b0));
  kv("channel.mu_los", format_double(s.channel.mu_los));
  kv("channel.mu_nlos", format_double(s.channel.mu_nlos));
  kv("channel.rx_sensitivity", format_double(s.channel.rx_sensitivity));
  kv("channel.tx_power", format_double(s.channel.tx_power));
  for (const auto& r : s.receivers) {
    out += "\n[receiver]\n";
    kv("id", std::to_string(r.id));
    kv("position", position_str(r.position));
    kv("kind", std::string(to_string(r.kind)));
    kv("sampling_rate", format_double(r.sampling_rate));
    if (r.kind == ReceiverKind::SN) {
      kv("clock.initial_offset", format_double(r.clock.initial_offset));
      kv("clock.servo_gain", format_double(r.clock.servo_gain));
      kv("clock.regime_switch_seed", std::to_string(r.clock.regime_switch_seed));
      for (const auto& g : r.clock.skew_regimes)
        kv("clock.regime", format_double(g.skew) + ' ' + format_double(g.noise_std) + ' ' +
                               format_double(g.dwell_mean));
    }
  }
  for (const auto& t : s.trajectories) {
    out += "\n[trajectory]\n";
    kv("av_id", std::to_string(t.av_id));
    kv("trusted", t.trusted ? "1" : "0");
    kv("broadcast_period", format_double(t.broadcast_period));
    kv("first_broadcast", format_double(t.first_broadcast));
    for (const auto& w : t.waypoints) kv("waypoint", format_double(w.t) + ' ' + position_str(w.position));
  }
  return out;
}

Scenario parse_scenario(std::string_view body) {
  Scenario s;
  enum class Section { Top, Receiver, Trajectory } section = Section::Top;
  bool saw_header = false;
  bool regimes_reset = false;
  std::size_t line_no = 0;
  while (!body.empty()) {
    const std::size_t nl = body.find('\n');
    std::string_view line = body.substr(0, nl);
    body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
    ++line_no;
    if (text::trim(line) == kScenarioHeader) {
      saw_header = true;
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (!saw_header) throw ParseError(line_no, "missing header '" + std::string(kScenarioHeader) + "'");

    if (line == "[receiver]") {
      section = Section::Receiver;
      s.receivers.emplace_back();
      regimes_reset = false;
      continue;
    }
    if (line == "[trajectory]") {
      section = Section::Trajectory;
      s.trajectories.emplace_back();
      continue;
    }
    if (line.front() == '[') throw ParseError(line_no, "unknown section " + std::string(line));

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string_view v = text::trim(line.substr(eq + 1));
    auto num = [&] { return text::parse_double(v, line_no); };
    auto unknown = [&] { return ParseError(line_no, "unknown key '" + key + "'"); };

    switch (section) {
      case Section::Top:
        if (key == "duration") s.duration = num();
        else if (key == "seed") s.rng_seed = text::parse_uint(v, line_no);
        else if (key == "toa_jitter_std") s.toa_jitter_std = num();
        else if (key == "server_latency") s.server_latency = num();
        else if (key == "clock_grid_step") s.clock_grid_step = num();
        else if (key == "quantize_toa") s.quantize_toa = parse_flag(v, line_no);
        else if (key == "channel.carrier_frequency") s.channel.carrier_frequency = num();
        else if (key == "channel.a0") s.channel.a0 = num();
        else if (key == "channel.b0") s.channel.b0 = num();
        else if (key == "channel.mu_los") s.channel.mu_los = num();
        else if (key == "channel.mu_nlos") s.channel.mu_nlos = num();
        else if (key == "channel.rx_sensitivity") s.channel.rx_sensitivity = num();
        else if (key == "channel.tx_power") s.channel.tx_power = num();
        else throw unknown();
        break;
      case Section::Receiver: {
        Receiver& r = s.receivers.back();
        if (key == "id") r.id = static_cast<int>(text::parse_int(v, line_no));
        else if (key == "position") {
          const auto p = numbers(v, 3, line_no);
          r.position = {p[0], p[1], p[2]};
        } else if (key == "kind") {
          const auto k = parse_receiver_kind(v);
          if (!k) throw ParseError(line_no, "kind must be GSN or SN");
          r.kind = *k;
        } else if (key == "sampling_rate") r.sampling_rate = num();
        else if (key == "clock.initial_offset") r.clock.initial_offset = num();
        else if (key == "clock.servo_gain") r.clock.servo_gain = num();
        else if (key == "clock.regime_switch_seed") r.clock.regime_switch_seed = text::parse_uint(v, line_no);
        else if (key == "clock.regime") {
          if (!regimes_reset) {
            r.clock.skew_regimes.clear();
            regimes_reset = true;
          }
          const auto g = numbers(v, 3, line_no);
          r.clock.skew_regimes.push_back({g[0], g[1], g[2]});
        } else throw unknown();
        break;
      }
      case Section::Trajectory: {
        Trajectory& t = s.trajectories.back();
        if (key == "av_id") t.av_id = static_cast<int>(text::parse_int(v, line_no));
        else if (key == "trusted") t.trusted = parse_flag(v, line_no);
        else if (key == "broadcast_period") t.broadcast_period = num();
        else if (key == "first_broadcast") t.first_broadcast = num();
        else if (key == "waypoint") {
          const auto w = numbers(v, 4, line_no);
          t.waypoints.push_back({w[0], {w[1], w[2], w[3]}});
        } else throw unknown();
        break;
      }
    }
  }
  if (!saw_header) throw ParseError(0, "missing header '" + std::string(kScenarioHeader) + "'");
  s.validate();
  return s;
}

}  // namespace avtrack::airsim
