#pragma once

#include <map>
#include <string>
#include <vector>

#include "avtrack/clocksync/offset.hpp"
#include "avtrack/geo.hpp"
#include "avtrack/pipeline/config.hpp"
#include "avtrack/records.hpp"

namespace avtrack::pipeline {

struct FixRow {
  int av_id = 0;
  double t = 0.0;  // server time of the broadcast
  int n_receivers = 0;
  geo::CartesianPosition truth;
  geo::CartesianPosition raw;  // MLAT fix
  geo::CartesianPosition kf;   // KF2 estimate (equals raw when KF2 is off)
  double raw_error = 0.0;
  double kf_error = 0.0;
};

struct RetrainEvent {
  double t = 0.0;
  std::size_t samples = 0;
  bool trained = false;  // false: deferred for lack of data
  std::string detail;    // fitted order or the failure reason
};

struct SyncDiagnostics {
  int sn_id = 0;
  std::vector<clocksync::OffsetSample> samples;  // measured offsets
  std::vector<double> predicted;  // aligned with samples; NaN where no model was available
  std::vector<double> residuals;  // measured minus predicted, before each online update
  std::vector<RetrainEvent> retrains;
  std::size_t quarantined = 0;  // target receptions dropped for lack of a valid model
};

struct RunCounters {
  std::size_t records = 0;
  std::size_t trusted_records = 0;
  std::size_t target_records = 0;
  std::size_t too_few_receivers = 0;
  std::size_t mlat_failures = 0;
  std::size_t ambiguous_resolved = 0;
  std::size_t ambiguous_dropped = 0;
  std::size_t missing_truth = 0;
  std::size_t gated = 0;  // fixes kept out of KF2 by the innovation gate
};

struct RunReport {
  SyncMode mode = SyncMode::None;
  bool kf2 = true;
  std::vector<FixRow> fixes;
  std::map<int, SyncDiagnostics> sync;
  RunCounters counters;
  geo::GeodeticPosition frame_origin;  // ENU origin of every Cartesian column
};

/// Offset samples per SN from trusted broadcasts (truth rows supply the
/// broadcaster positions). Same-time samples for one SN are averaged.
std::map<int, std::vector<clocksync::OffsetSample>> measure_offsets(
    const std::vector<BroadcastRecord>& records, const std::vector<TruthRow>& truth,
    const RunConfig& config);

/// Processes records in server-time order: trusted broadcasts feed the
/// per-SN clock models, target broadcasts are compensated, localised by MLAT
/// when enough receivers remain, and smoothed by a per-target KF2.
RunReport run(const RunConfig& config, const std::vector<BroadcastRecord>& records,
              const std::vector<TruthRow>& truth);

}  // namespace avtrack::pipeline
