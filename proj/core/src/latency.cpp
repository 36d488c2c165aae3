#include "skyfeel/latency.hpp"

#include <algorithm>
#include <stdexcept>

namespace skyfeel {

double sensing_time(double delta, const ComputeParams& p) {
    if (delta <= 0.0)
        throw std::domain_error("sensing_time: delta must be positive");
    return p.unit_sense_time_s * delta;
}

double compute_time(double delta, bool participated, const ComputeParams& p) {
    if (delta <= 0.0)
        throw std::domain_error("compute_time: delta must be positive");
    return participated ? delta * p.cycles_per_sample / p.cpu_hz : 0.0;
}

double upload_time(double rate_bps, bool participated, const ComputeParams& p) {
    if (!participated) return 0.0;
    if (rate_bps <= 0.0)
        throw std::domain_error("upload_time: rate must be positive for a participant");
    return p.payload_bits / rate_bps;
}

double expected_round_latency(double delta, double q, double rate_bps,
                              const ComputeParams& p) {
    if (!(q > 0.0 && q <= 1.0))
        throw std::domain_error("expected_round_latency: q must be in (0, 1]");
    return sensing_time(delta, p) +
           q * (compute_time(delta, true, p) + upload_time(rate_bps, true, p));
}

double round_latency(const std::vector<UavTiming>& timings) {
    if (timings.empty())
        throw std::invalid_argument("round_latency: no UAVs");
    double worst = 0.0;
    for (const auto& t : timings) worst = std::max(worst, t.total_s());
    return worst;
}

}  // namespace skyfeel
