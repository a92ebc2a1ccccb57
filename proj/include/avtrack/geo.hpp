#pragma once

#include <Eigen/Core>

namespace avtrack::geo {

/// WGS-84 ellipsoid constants.
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);

/// Latitude/longitude in degrees, altitude in metres above the ellipsoid.
struct GeodeticPosition {
  double latitude = 0.0;
  double longitude = 0.0;
  double altitude = 0.0;

  /// Throws std::invalid_argument when a field is out of range or non-finite.
  void validate() const;
  bool operator==(const GeodeticPosition&) const = default;
};

/// East-north-up coordinates in metres relative to a declared origin.
struct CartesianPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static CartesianPosition from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
  bool operator==(const CartesianPosition&) const = default;
};

Eigen::Vector3d geodetic_to_ecef(const GeodeticPosition& p);
GeodeticPosition ecef_to_geodetic(const Eigen::Vector3d& ecef);

/// Rotation taking ECEF difference vectors into the ENU frame at `origin`.
Eigen::Matrix3d ecef_to_enu_rotation(const GeodeticPosition& origin);

CartesianPosition geodetic_to_local(const GeodeticPosition& p, const GeodeticPosition& origin);
GeodeticPosition local_to_geodetic(const CartesianPosition& p, const GeodeticPosition& origin);

double distance(const CartesianPosition& a, const CartesianPosition& b);

/// Elevation of `air` seen from `ground`, degrees in [0, 90]. Co-located points give 90.
/// Throws std::invalid_argument if `air` is below `ground`.
double elevation_angle(const CartesianPosition& ground, const CartesianPosition& air);

/// Normalises a longitude into (-180, 180].
double wrap_longitude(double lon_deg);

}  // namespace avtrack::geo
