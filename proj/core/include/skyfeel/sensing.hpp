#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "skyfeel/rng.hpp"

namespace skyfeel {

/// FMCW waveform and receive-chain constants. The sample rate is implied by
/// samples_per_chirp / chirp_s so f_s * T_p is an integer by construction.
struct SensingWaveform {
    double carrier_hz = 6.0e10;          // f_c
    double sweep_bandwidth_hz = 1.0e7;   // B_s
    double chirp_s = 1.0e-5;             // T_p
    std::size_t chirps_per_frame = 25;   // M
    std::size_t samples_per_chirp = 64;  // f_s * T_p
    double tx_power_w = 1.0;             // p_s
    double antenna_gain = 1.0;           // A0

    double sample_rate_hz() const {
        return static_cast<double>(samples_per_chirp) / chirp_s;
    }
    /// Spectrogram framing period M * T_p (distinct from the latency model's
    /// unit sensing time, which is configured independently).
    double frame_s() const { return static_cast<double>(chirps_per_frame) * chirp_s; }
};

/// One point scatterer with radial motion
/// d(t) = d0 + v * t + a * sin(2*pi*f*t + phase).
struct Scatterer {
    double base_distance_m = 100.0;
    double radial_velocity_mps = 0.0;
    double osc_amplitude_m = 0.0;
    double osc_freq_hz = 0.0;
    double osc_phase_rad = 0.0;
    double amplitude = 1.0;  // RCS-proportional return strength G

    double distance_at(double t) const;
};

/// Body surrogate: a handful of point scatterers with limb-like radial
/// oscillations.
struct ScattererTrack {
    std::vector<Scatterer> scatterers;
};

/// Complex fast-time x slow-time matrix for one sensing duration.
struct EchoMatrix {
    std::size_t samples_per_chirp = 0;  // rows (fast time)
    std::size_t chirps = 0;             // columns (slow time)
    std::size_t frame_index = 0;        // rho, 1-based
    std::vector<std::complex<double>> data;  // row-major

    std::complex<double>& at(std::size_t r, std::size_t m) {
        return data[r * chirps + m];
    }
    std::complex<double> at(std::size_t r, std::size_t m) const {
        return data[r * chirps + m];
    }
};

/// Range-Doppler-time cube: STFT over slow time per range bin.
struct RdtCube {
    std::size_t range_bins = 0;
    std::size_t freq_bins = 0;  // W
    std::size_t cols = 0;       // (M - Q) / (W - Q)
    std::size_t frame_index = 0;
    std::size_t overlap = 0;    // Q
    std::vector<std::complex<double>> data;

    std::complex<double>& at(std::size_t r, std::size_t f, std::size_t m) {
        return data[(r * freq_bins + f) * cols + m];
    }
    std::complex<double> at(std::size_t r, std::size_t f, std::size_t m) const {
        return data[(r * freq_bins + f) * cols + m];
    }
};

/// Non-negative integrated magnitude spectrogram (W rows x temporal columns).
struct SpectrogramFrame {
    std::size_t rows = 0;  // frequency bins W
    std::size_t cols = 0;
    std::size_t frame_index = 0;  // rho
    std::size_t window_len = 0;
    std::size_t overlap = 0;
    std::vector<double> values;  // row-major

    double& at(std::size_t f, std::size_t m) { return values[f * cols + m]; }
    double at(std::size_t f, std::size_t m) const { return values[f * cols + m]; }
};

enum class WindowKind { kHann, kRect };

std::vector<double> make_window(WindowKind kind, std::size_t length);

/// Synthesizes the echo matrix of one sensing duration rho (1-based):
/// deterministic superposition of scatterer returns (amplitude 1/d^2, carrier
/// phase -4*pi*fc*d/c, delayed baseband chirp) plus complex Gaussian clutter
/// of the given power. Identical (track, waveform, rho, seed) give identical
/// output.
EchoMatrix synth_echo(const ScattererTrack& track, const SensingWaveform& waveform,
                      double noise_power_w, std::size_t rho, std::uint64_t seed);

/// STFT along slow time per range bin with hop W - Q. Requires
/// (M - Q) divisible by (W - Q).
RdtCube stft_rdt(const EchoMatrix& echo, const std::vector<double>& window,
                 std::size_t overlap);

/// Non-coherent integration over range bins: sums |.| over r.
SpectrogramFrame integrate_spectrogram(const RdtCube& cube);

/// Peak signal-to-noise ratio in dB with the reference frame's maximum as
/// peak. Identical frames give +infinity.
double psnr_db(const SpectrogramFrame& reference, const SpectrogramFrame& test);

/// Doppler bin carrying the most energy (values summed over time columns).
std::size_t dominant_doppler_bin(const SpectrogramFrame& frame);

/// Builds a limb-like track whose scatterers sit near `base_distance_m`;
/// oscillation parameters come deterministically from `seed` so every angle
/// of a sweep sees the same motion.
ScattererTrack make_motion_track(double base_distance_m, std::size_t scatterers,
                                 double osc_amplitude_m, double osc_freq_hz,
                                 std::uint64_t seed);

struct SweepPoint {
    double angle_deg = 0.0;
    double mean_psnr_db = 0.0;
    std::size_t frames = 0;
};

struct SweepSettings {
    std::vector<double> angles_deg{30, 40, 50, 60, 70, 80, 90};
    double altitude_m = 100.0;
    std::size_t frames = 6;
    std::size_t scatterers = 3;
    double osc_amplitude_m = 0.1;
    double osc_freq_hz = 2.0;
    double noise_power_w = 1e-12;
    WindowKind window = WindowKind::kHann;
    std::size_t window_len = 16;
    std::size_t overlap = 8;
    unsigned threads = 0;
};

/// Spectrogram-quality sweep over sensing elevation angles: scatterer
/// distances follow H / sin(theta), the 90-degree frames serve as reference,
/// and each angle reports the mean PSNR against that reference.
std::vector<SweepPoint> elevation_sweep(
    const std::function<ScattererTrack(double base_distance_m)>& track_generator,
    const SweepSettings& settings, const SensingWaveform& waveform,
    std::uint64_t seed);

/// Convenience overload using make_motion_track as the generator.
std::vector<SweepPoint> elevation_sweep(const SweepSettings& settings,
                                        const SensingWaveform& waveform,
                                        std::uint64_t seed);

}  // namespace skyfeel
