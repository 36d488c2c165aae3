#include "skyfeel/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace skyfeel {

double elevation_angle_deg(const Position& a, const Position& b) {
    const double d = distance(a, b);
    if (d == 0.0)
        throw std::domain_error("elevation_angle_deg: coincident points");
    const double ratio = std::min(1.0, std::abs(a.z - b.z) / d);
    return rad_to_deg(std::asin(ratio));
}

}  // namespace skyfeel
