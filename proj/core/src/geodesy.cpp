#include "gnsssim/geodesy.hpp"

#include "gnsssim/constants.hpp"
#include "gnsssim/errors.hpp"

#include <cmath>

namespace gnss {

Vec3 geodetic_to_ecef(double lat_rad, double lon_rad, double height_m) {
    const double slat = std::sin(lat_rad);
    const double clat = std::cos(lat_rad);
    const double n = kEarthSemiMajor / std::sqrt(1.0 - kEarthEccSq * slat * slat);
    return {(n + height_m) * clat * std::cos(lon_rad),
            (n + height_m) * clat * std::sin(lon_rad),
            (n * (1.0 - kEarthEccSq) + height_m) * slat};
}

double elevation_angle(const Vec3& ground_ecef, const Vec3& target_ecef) {
    const Vec3 los = target_ecef - ground_ecef;
    const double range = los.norm();
    if (range <= 0.0) {
        throw GeometryError("elevation undefined for coincident positions");
    }
    // Ellipsoidal normal approximated by the geocentric up direction; the
    // difference is < 0.2 deg and irrelevant against a 10 deg mask.
    const Vec3 up = ground_ecef.normalized();
    const double s = los.dot(up) / range;
    return std::asin(std::clamp(s, -1.0, 1.0));
}

} // namespace gnss
