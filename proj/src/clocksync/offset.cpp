#include "avtrack/clocksync/offset.hpp"

#include "avtrack/constants.hpp"

namespace avtrack::clocksync {

double measure_offset(double gsn_toa, double sn_toa, const geo::CartesianPosition& av_pos,
                      const geo::CartesianPosition& gsn_pos, const geo::CartesianPosition& sn_pos) {
  const double tof_gsn = geo::distance(av_pos, gsn_pos) / kSpeedOfLight;
  const double tof_sn = geo::distance(av_pos, sn_pos) / kSpeedOfLight;
  // Grouped so that equal ToAs and equal flight times cancel exactly.
  return (gsn_toa - sn_toa) + (tof_sn - tof_gsn);
}

}  // namespace avtrack::clocksync
