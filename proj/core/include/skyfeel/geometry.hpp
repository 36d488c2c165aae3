#pragma once

#include <cmath>

namespace skyfeel {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// 3-D position in metres; z is altitude above ground.
struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Elevation angle in degrees between two points: asin(|dz| / distance).
/// Symmetric in its arguments, in [0, 90]. Throws std::domain_error for
/// coincident points.
double elevation_angle_deg(const Position& a, const Position& b);

}  // namespace skyfeel
