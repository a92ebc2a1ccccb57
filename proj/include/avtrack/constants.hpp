#pragma once

namespace avtrack {

// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

}  // namespace avtrack
