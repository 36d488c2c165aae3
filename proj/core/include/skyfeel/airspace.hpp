#pragma once

#include <stdexcept>
#include <vector>

#include "skyfeel/geometry.hpp"

namespace skyfeel {

/// Logistic line-of-sight environment constants (psi dimensionless,
/// zeta per degree). Typical urban values: psi = 11.95, zeta = 0.14.
struct Environment {
    double psi = 11.95;
    double zeta = 0.14;
};

/// Air-to-ground radio link parameters, all in SI linear units. dB / dBm
/// values are converted at the configuration boundary, never stored here.
struct RadioParams {
    double carrier_hz = 6.0e10;
    double pathloss_exp = 2.0;
    double excess_los_linear = 1.9952623149688795;    // 3 dB
    double excess_nlos_linear = 199.52623149688787;   // 23 dB
    double noise_psd_w_per_hz = 3.9810717055349565e-21;  // -174 dBm/Hz
    double total_bandwidth_hz = 6.0e6;
    std::vector<double> tx_power_w;  // per-UAV uplink power, watts
};

/// Static deployment scene: one server, K sensing targets, constant UAV
/// altitude, environment and radio constants, and the minimum sensing
/// elevation angle theta0 that guarantees sample quality.
struct Scene {
    Position server{};
    std::vector<Position> targets;
    double uav_altitude_m = 150.0;
    Environment env_sensing{};
    Environment env_comm{};
    RadioParams radio{};
    double theta0_deg = 70.0;

    std::size_t num_uavs() const { return targets.size(); }
    double tx_power_w(std::size_t k) const;
};

/// Line-of-sight (equivalently, successful-sensing) probability for a given
/// elevation angle: 1 / (1 + psi * exp(-zeta * (theta - psi))).
/// Strictly increasing in theta; returns a value in (0, 1).
double los_probability(double theta_deg, const Environment& env);

/// Inverse of los_probability: the elevation angle at which the LOS
/// probability equals q. Requires q in (0, 1).
double theta_from_qs(double q, const Environment& env);

/// Average air-to-ground channel gain (linear) between a UAV and the scene's
/// server: (K0 * d)^(-alpha) / (eta1 * qc + eta2 * (1 - qc)) with
/// K0 = 4*pi*fc/c and qc the LOS probability of the link.
double channel_gain(const Position& uav, const Scene& scene);

/// Shannon uplink rate in bit/s over a dedicated sub-channel:
/// B * log2(1 + p * h / (B * N0)). Log base 2 by convention since payload
/// sizes are bit counts.
double uplink_rate(const Position& uav, double bandwidth_hz, const Scene& scene,
                   std::size_t uav_index = 0);

/// Rate from an explicit channel gain; used by solvers that cache gains.
double uplink_rate_from_gain(double gain, double bandwidth_hz, double tx_power_w,
                             double noise_psd_w_per_hz);

/// Closed-form optimal UAV position for a given uniform sensing probability:
/// altitude H, sensing elevation exactly theta_s(q) towards `target`, placed
/// on the vertical plane through server and target on the server side.
/// A target directly above the server is resolved by offsetting along +x.
Position optimal_position(double q, const Position& target, const Scene& scene);

/// Uplink rate at the optimal position for sensing probability q.
/// Requires the placement to stay between server and target footprint
/// (H / tan(theta_s) < horizontal server-target distance); a violation
/// throws GeometryError.
double rate_given_qs(double q, double bandwidth_hz, const Position& target,
                     const Scene& scene, std::size_t uav_index = 0);

/// Thrown when the q_s -> position mapping leaves its validity region.
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace skyfeel
