#include "skyfeel/rng.hpp"

#include <cmath>

namespace skyfeel {

double Rng::normal() {
    // Box-Muller; u1 bounded away from 0 so log() stays finite
    double u1 = u01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace skyfeel
