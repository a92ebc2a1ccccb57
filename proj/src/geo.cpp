#include "avtrack/geo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace avtrack::geo {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

void GeodeticPosition::validate() const {
  if (!std::isfinite(latitude) || latitude < -90.0 || latitude > 90.0)
    throw std::invalid_argument("latitude out of range: " + std::to_string(latitude));
  if (!std::isfinite(longitude) || longitude <= -180.0 || longitude > 180.0)
    throw std::invalid_argument("longitude out of range: " + std::to_string(longitude));
  if (!std::isfinite(altitude)) throw std::invalid_argument("altitude is not finite");
}

double wrap_longitude(double lon_deg) {
  double l = std::fmod(lon_deg, 360.0);
  if (l > 180.0) l -= 360.0;
  if (l <= -180.0) l += 360.0;
  return l;
}

Eigen::Vector3d geodetic_to_ecef(const GeodeticPosition& p) {
  const double lat = p.latitude * kDeg;
  const double lon = p.longitude * kDeg;
  const double s = std::sin(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * s * s);
  return {(n + p.altitude) * std::cos(lat) * std::cos(lon),
          (n + p.altitude) * std::cos(lat) * std::sin(lon),
          (n * (1.0 - kWgs84E2) + p.altitude) * s};
}

GeodeticPosition ecef_to_geodetic(const Eigen::Vector3d& e) {
  const double x = e.x(), y = e.y(), z = e.z();
  const double r = std::hypot(x, y);
  const double lon = std::atan2(y, x);
  // Fixed-point iteration on latitude; converges to ~1e-15 rad in a handful of steps
  // for any point outside the Earth's core.
  double lat = std::atan2(z, r * (1.0 - kWgs84E2));
  double h = 0.0;
  for (int it = 0; it < 20; ++it) {
    const double s = std::sin(lat);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * s * s);
    const double c = std::cos(lat);
    h = std::abs(c) > 1e-10 ? r / c - n : std::abs(z) - n * (1.0 - kWgs84E2);
    const double next = std::atan2(z, r * (1.0 - kWgs84E2 * n / (n + h)));
    const bool done = std::abs(next - lat) < 1e-15;
    lat = next;
    if (done) break;
  }
  const double s = std::sin(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * s * s);
  const double c = std::cos(lat);
  h = std::abs(c) > 1e-10 ? r / c - n : std::abs(z) - n * (1.0 - kWgs84E2);
  return {lat / kDeg, wrap_longitude(lon / kDeg), h};
}

Eigen::Matrix3d ecef_to_enu_rotation(const GeodeticPosition& origin) {
  const double lat = origin.latitude * kDeg;
  const double lon = origin.longitude * kDeg;
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);
  Eigen::Matrix3d r;
  r << -so, co, 0.0,
       -sl * co, -sl * so, cl,
        cl * co, cl * so, sl;
  return r;
}

CartesianPosition geodetic_to_local(const GeodeticPosition& p, const GeodeticPosition& origin) {
  const Eigen::Vector3d d = geodetic_to_ecef(p) - geodetic_to_ecef(origin);
  return CartesianPosition::from(ecef_to_enu_rotation(origin) * d);
}

GeodeticPosition local_to_geodetic(const CartesianPosition& p, const GeodeticPosition& origin) {
  const Eigen::Vector3d e =
      geodetic_to_ecef(origin) + ecef_to_enu_rotation(origin).transpose() * p.vec();
  return ecef_to_geodetic(e);
}

double distance(const CartesianPosition& a, const CartesianPosition& b) {
  return (a.vec() - b.vec()).norm();
}

double elevation_angle(const CartesianPosition& ground, const CartesianPosition& air) {
  const double h = air.z - ground.z;
  if (h < 0.0) throw std::invalid_argument("elevation_angle: air point below ground point");
  const double r = std::hypot(air.x - ground.x, air.y - ground.y);
  if (r == 0.0) return 90.0;
  return std::atan2(h, r) / kDeg;
}

}  // namespace avtrack::geo
