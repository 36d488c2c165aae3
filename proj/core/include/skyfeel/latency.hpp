#pragma once

#include <cstddef>
#include <vector>

namespace skyfeel {

/// Per-UAV sensing / compute pipeline constants.
struct ComputeParams {
    double unit_sense_time_s = 0.5;    // T0, seconds per sample
    double cycles_per_sample = 2.5e7;  // CPU cycles to process one sample
    double cpu_hz = 5.0e8;             // onboard CPU frequency
    double payload_bits = 156821664.0; // uplink gradient size D0
};

/// Realised timing of one UAV in one round.
struct UavTiming {
    double sense_s = 0.0;
    double compute_s = 0.0;
    double upload_s = 0.0;
    bool participated = false;

    double total_s() const { return sense_s + compute_s + upload_s; }
};

/// T0 * delta. delta must be positive (integer in final plans, real while
/// the optimizer works on the relaxation).
double sensing_time(double delta, const ComputeParams& p);

/// delta * cycles / f_cpu if the UAV participates this round, else 0.
double compute_time(double delta, bool participated, const ComputeParams& p);

/// D0 / rate if the UAV participates this round, else 0.
double upload_time(double rate_bps, bool participated, const ComputeParams& p);

/// Expected per-round latency of one UAV under sensing probability q:
/// T0*delta + q * (delta*cycles/f_cpu + D0/rate).
double expected_round_latency(double delta, double q, double rate_bps,
                              const ComputeParams& p);

/// Synchronous-round latency: max over UAVs of sense+compute+upload.
double round_latency(const std::vector<UavTiming>& timings);

}  // namespace skyfeel
