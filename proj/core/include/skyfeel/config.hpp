#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "skyfeel/airspace.hpp"
#include "skyfeel/bbpo.hpp"
#include "skyfeel/feel.hpp"
#include "skyfeel/latency.hpp"
#include "skyfeel/sensing.hpp"

namespace skyfeel {

/// Configuration error with the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what),
          path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Scene block as configured: dB/dBm quantities keep their configured form
/// so that dump -> parse round-trips bit-exactly; SI conversion happens in
/// build_scene().
struct SceneConfig {
    Position server{0.0, 0.0, 0.0};
    std::vector<Position> targets;  // resolved at load time
    std::size_t num_uavs = 8;
    double target_radius_min_m = 80.0;
    double target_radius_max_m = 180.0;
    std::uint64_t placement_seed = 1;
    double uav_altitude_m = 150.0;
    double theta0_deg = 70.0;
    Environment env_sensing{};
    Environment env_comm{};
};

struct RadioConfig {
    double carrier_hz = 6.0e10;
    double pathloss_exp = 2.0;
    double excess_los_db = 3.0;
    double excess_nlos_db = 23.0;
    double noise_psd_dbm_per_hz = -174.0;
    double total_bandwidth_hz = 6.0e6;
    std::vector<double> tx_power_dbm{20.0};  // singleton means shared
};

struct LearningConfig {
    double eta = 0.1;
    double smoothness = 1.0;
    double strong_convexity = 0.5;
    std::vector<double> sigma2{0.5};   // singleton means shared
    std::vector<double> lambda2{0.001};
    double initial_gap = 1.0;
    double epsilon = 0.05;
};

struct WaveformConfig {
    double carrier_hz = 6.0e10;
    double sweep_bandwidth_hz = 1.0e7;
    double chirp_s = 1.0e-5;
    std::size_t chirps_per_frame = 25;
    std::size_t samples_per_chirp = 64;
    double tx_power_dbm = 30.0;
    double antenna_gain = 1.0;
};

struct SimConfig {
    std::size_t dim = 10;
    AllFailPolicy all_fail = AllFailPolicy::kCountRound;
    std::uint64_t task_seed = 7;
    double baseline_theta_deg = 75.0;
    double baseline_delta = 64.0;
};

/// Full parameter document. The reference system parameters are the
/// defaults; an empty JSON
/// document loads to exactly those.
struct Config {
    SceneConfig scene;
    RadioConfig radio;
    ComputeParams compute;
    LearningConfig learning;
    SolverSettings solver;
    WaveformConfig waveform;
    SweepSettings sweep;
    SimConfig sim;

    /// SI-unit scene for the channel/optimizer modules.
    Scene build_scene() const;
    /// Per-UAV learning constants (scalar sigma2/lambda2 broadcast over K).
    LearningConstants build_learning() const;
    /// SI-unit sensing waveform.
    SensingWaveform build_waveform() const;
};

Config default_config();

/// Parses a JSON document string: strict schema, defaults for absent keys,
/// unknown keys rejected with their path, dB/dBm converted on ingest (into
/// the build_* products).
Config parse_config(const std::string& json_text);

/// Loads and parses a JSON config file.
Config load_config(const std::string& path);

/// Canonical JSON serialization of a resolved config (targets materialized);
/// parse_config(dump_config(c)) reproduces c exactly.
std::string dump_config(const Config& config);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const Config& config);

}  // namespace skyfeel
