#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "avtrack/geo.hpp"

namespace avtrack {

enum class ReceiverKind { GSN, SN };

std::string_view to_string(ReceiverKind k);
std::optional<ReceiverKind> parse_receiver_kind(std::string_view s);

/// One receiver's capture of a broadcast.
struct Reception {
  int rx_id = 0;
  geo::GeodeticPosition position;
  double toa = 0.0;  // seconds, receiver's local clock
  ReceiverKind kind = ReceiverKind::GSN;

  bool operator==(const Reception&) const = default;
};

/// One transmission as seen by every receiver that captured it.
struct BroadcastRecord {
  double server_time = 0.0;
  int av_id = 0;
  bool trusted = false;
  std::vector<Reception> receptions;

  std::size_t n() const { return receptions.size(); }
  bool operator==(const BroadcastRecord&) const = default;
};

/// Ground-truth emitter position for one transmission.
struct TruthRow {
  int av_id = 0;
  std::int64_t index = 0;  // transmission index within the AV's broadcast sequence
  double time = 0.0;       // emission time on the reference timeline
  geo::GeodeticPosition position;

  bool operator==(const TruthRow&) const = default;
};

}  // namespace avtrack
