#pragma once

#include "avtrack/geo.hpp"

namespace avtrack::clocksync {

/// One measured SN-vs-GSN clock offset.
struct OffsetSample {
  double t = 0.0;    // s, reference timeline
  double eta = 0.0;  // s
  int sn_id = 0;
  int gsn_id = 0;
  int av_id = 0;

  bool operator==(const OffsetSample&) const = default;
};

/// eta = t_gsn - dt_gsn + dt_sn - t_sn, with dt the time of flight from the
/// broadcaster to each receiver. Positive when the SN clock lags true time.
double measure_offset(double gsn_toa, double sn_toa, const geo::CartesianPosition& av_pos,
                      const geo::CartesianPosition& gsn_pos, const geo::CartesianPosition& sn_pos);

}  // namespace avtrack::clocksync
