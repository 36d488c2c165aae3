#include "skyfeel/airspace.hpp"

#include <cmath>
#include <string>

namespace skyfeel {

double Scene::tx_power_w(std::size_t k) const {
    if (radio.tx_power_w.empty())
        throw std::invalid_argument("Scene: tx_power_w not set");
    if (radio.tx_power_w.size() == 1) return radio.tx_power_w.front();
    return radio.tx_power_w.at(k);
}

double los_probability(double theta_deg, const Environment& env) {
    if (theta_deg < 0.0 || theta_deg > 90.0)
        throw std::domain_error("los_probability: theta must be in [0, 90] degrees");
    return 1.0 / (1.0 + env.psi * std::exp(-env.zeta * (theta_deg - env.psi)));
}

double theta_from_qs(double q, const Environment& env) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("theta_from_qs: q must be in (0, 1)");
    return env.psi - (std::log(1.0 / q - 1.0) - std::log(env.psi)) / env.zeta;
}

double channel_gain(const Position& uav, const Scene& scene) {
    const double d = distance(uav, scene.server);
    if (d == 0.0)
        throw std::domain_error("channel_gain: UAV coincides with server");
    const double theta_c = elevation_angle_deg(uav, scene.server);
    const double qc = los_probability(theta_c, scene.env_comm);
    const RadioParams& r = scene.radio;
    const double k0 = 4.0 * kPi * r.carrier_hz / kSpeedOfLight;
    const double pathloss = std::pow(k0 * d, -r.pathloss_exp);
    return pathloss / (r.excess_los_linear * qc + r.excess_nlos_linear * (1.0 - qc));
}

double uplink_rate_from_gain(double gain, double bandwidth_hz, double tx_power_w,
                             double noise_psd_w_per_hz) {
    if (bandwidth_hz <= 0.0)
        throw std::domain_error("uplink_rate: bandwidth must be positive");
    const double snr = tx_power_w * gain / (bandwidth_hz * noise_psd_w_per_hz);
    return bandwidth_hz * std::log2(1.0 + snr);
}

double uplink_rate(const Position& uav, double bandwidth_hz, const Scene& scene,
                   std::size_t uav_index) {
    return uplink_rate_from_gain(channel_gain(uav, scene), bandwidth_hz,
                                 scene.tx_power_w(uav_index),
                                 scene.radio.noise_psd_w_per_hz);
}

Position optimal_position(double q, const Position& target, const Scene& scene) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("optimal_position: q must be in (0, 1)");
    const double h = scene.uav_altitude_m;
    const double dz = h - target.z;
    if (dz <= 0.0)
        throw std::domain_error("optimal_position: UAV altitude must exceed target altitude");

    const double theta_s = theta_from_qs(q, scene.env_sensing);
    // horizontal standoff from the target that realises the sensing angle
    const double standoff = theta_s >= 90.0 ? 0.0 : dz / std::tan(deg_to_rad(theta_s));

    const double ground = horizontal_distance(target, scene.server);
    double ux, uy;
    if (ground == 0.0) {
        // target directly above the server: tie-break along +x
        ux = target.x + standoff;
        uy = target.y;
    } else {
        ux = target.x - standoff * (target.x - scene.server.x) / ground;
        uy = target.y - standoff * (target.y - scene.server.y) / ground;
    }
    return Position{ux, uy, h};
}

double rate_given_qs(double q, double bandwidth_hz, const Position& target,
                     const Scene& scene, std::size_t uav_index) {
    const double h = scene.uav_altitude_m;
    const double dz = h - target.z;
    if (dz <= 0.0)
        throw std::domain_error("rate_given_qs: UAV altitude must exceed target altitude");
    const double theta_s = theta_from_qs(q, scene.env_sensing);
    const double standoff = theta_s >= 90.0 ? 0.0 : dz / std::tan(deg_to_rad(theta_s));
    const double ground = horizontal_distance(target, scene.server);
    if (ground == 0.0)
        throw GeometryError("rate_given_qs: target directly above server");
    if (standoff >= ground)
        throw GeometryError(
            "rate_given_qs: standoff H/tan(theta_s) = " + std::to_string(standoff) +
            " m reaches past the server (server-target ground distance " +
            std::to_string(ground) + " m)");
    const Position u = optimal_position(q, target, scene);
    return uplink_rate(u, bandwidth_hz, scene, uav_index);
}

}  // namespace skyfeel
