#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gnss {

using Vec3 = Eigen::Vector3d;

/// Geodetic (WGS-84) latitude/longitude in radians, height in meters -> ECEF.
Vec3 geodetic_to_ecef(double lat_rad, double lon_rad, double height_m);

/// Elevation angle (rad) of a target as seen from an ECEF ground position,
/// measured from the local horizon plane.
double elevation_angle(const Vec3& ground_ecef, const Vec3& target_ecef);

} // namespace gnss
