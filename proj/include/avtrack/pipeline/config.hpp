#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "avtrack/clocksync/kf1.hpp"
#include "avtrack/lstm/lstm.hpp"
#include "avtrack/tracker/tracker.hpp"

namespace avtrack::pipeline {

enum class SyncMode { None, Prior, Arima, Lstm, Gsn };

std::string_view to_string(SyncMode m);
/// Accepts none|prior|arima|lstm|gsn plus the long forms prior_offset and all_gsn_baseline.
std::optional<SyncMode> parse_sync_mode(std::string_view s);
std::vector<SyncMode> all_modes();

enum class UnknownPolicy { Reject, Trusted, Target };

/// How one trusted broadcast seen by several GSNs becomes an offset sample.
enum class PairingPolicy { Average, FirstGsn };

struct ClassifyPolicy {
  std::vector<int> targets;
  std::vector<int> trusted;
  bool use_record_flag = true;
  UnknownPolicy unknown = UnknownPolicy::Reject;
};

struct RunConfig {
  SyncMode mode = SyncMode::Arima;
  double retrain_period = 1200.0;  // s
  std::size_t min_training_msgs = 100;
  int min_receivers = 4;
  /// An SN is quarantined when its newest offset sample is older than this.
  double sample_expiry = 1200.0;  // s
  PairingPolicy pairing = PairingPolicy::Average;
  ClassifyPolicy classify;

  clocksync::Kf1Options kf1;
  clocksync::OrderSelectionOptions order_selection;
  lstm::LstmConfig lstm;

  bool use_kf2 = true;
  tracker::MotionModel motion;
  bool propagate_R = true;  // derive KF2 R from the fix geometry
  double toa_sigma_gsn = 20e-9;
  double toa_sigma_sn = 40e-9;
  /// Fixes whose KF2 innovation NIS exceeds this are not fed to the filter
  /// (0 disables). After `kf2_gate_reset` rejections in a row the track restarts.
  double kf2_gate = 16.27;
  int kf2_gate_reset = 5;

  std::uint64_t seed = 1;

  void validate() const;
};

}  // namespace avtrack::pipeline
