#pragma once

#include <cstdint>

namespace skyfeel {

/// Deterministic 64-bit PRNG (xoshiro256++) with splitmix64 seeding.
///
/// Simulation results must be byte-identical across runs and thread counts,
/// so every replication / sweep item derives its own independent stream from
/// (seed, stream) and never shares state. The generator is self-contained to
/// keep output independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        // splitmix64 over the pair; decorrelates nearby seeds and streams
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& s : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            s = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    bool bernoulli(double p) { return u01() < p; }

    /// Standard normal via Box-Muller (uncached; two uniforms per draw).
    double normal();

    /// Gaussian with given mean and standard deviation.
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace skyfeel
