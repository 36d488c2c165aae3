#include "skyfeel/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skyfeel/geometry.hpp"
#include "skyfeel/parallel.hpp"

namespace skyfeel {

namespace {

/// Transmitted baseband chirp, repeating every T_p: linear FM of bandwidth
/// B_s across the chirp.
std::complex<double> chirp_sample(double t, const SensingWaveform& wf) {
    double tau = std::fmod(t, wf.chirp_s);
    if (tau < 0.0) tau += wf.chirp_s;
    const double phase = kPi * wf.sweep_bandwidth_hz / wf.chirp_s * tau * tau;
    return {std::cos(phase), std::sin(phase)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double Scatterer::distance_at(double t) const {
    return base_distance_m + radial_velocity_mps * t +
           osc_amplitude_m * std::sin(2.0 * kPi * osc_freq_hz * t + osc_phase_rad);
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    if (length < 2) throw std::invalid_argument("make_window: length must be >= 2");
    std::vector<double> w(length, 1.0);
    if (kind == WindowKind::kHann) {
        for (std::size_t i = 0; i < length; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                        static_cast<double>(length - 1));
    }
    return w;
}

EchoMatrix synth_echo(const ScattererTrack& track, const SensingWaveform& waveform,
                      double noise_power_w, std::size_t rho, std::uint64_t seed) {
    if (track.scatterers.empty())
        throw std::invalid_argument("synth_echo: track has no scatterers");
    if (rho == 0) throw std::invalid_argument("synth_echo: rho is 1-based");
    if (noise_power_w < 0.0)
        throw std::domain_error("synth_echo: noise power must be >= 0");

    const std::size_t rows = waveform.samples_per_chirp;
    const std::size_t chirps = waveform.chirps_per_frame;
    EchoMatrix echo;
    echo.samples_per_chirp = rows;
    echo.chirps = chirps;
    echo.frame_index = rho;
    echo.data.assign(rows * chirps, {0.0, 0.0});

    const double t0 = static_cast<double>(rho - 1) * waveform.frame_s();
    const double fs = waveform.sample_rate_hz();
    const double amp_scale =
        std::sqrt(waveform.tx_power_w) * waveform.antenna_gain / std::sqrt(4.0 * kPi);
    const double carrier_k = 4.0 * kPi * waveform.carrier_hz / kSpeedOfLight;

    for (const auto& sc : track.scatterers) {
        for (std::size_t m = 0; m < chirps; ++m) {
            // distance held constant within a chirp, updated chirp to chirp
            const double t_chirp = t0 + static_cast<double>(m) * waveform.chirp_s;
            const double d = sc.distance_at(t_chirp);
            if (d <= 0.0) throw std::domain_error("synth_echo: scatterer distance <= 0");
            const double phase = -carrier_k * d;
            const std::complex<double> gain =
                amp_scale * std::sqrt(sc.amplitude) / (d * d) *
                std::complex<double>{std::cos(phase), std::sin(phase)};
            const double delay = 2.0 * d / kSpeedOfLight;
            for (std::size_t r = 0; r < rows; ++r) {
                const double t =
                    static_cast<double>(m) * waveform.chirp_s + static_cast<double>(r) / fs;
                echo.at(r, m) += gain * chirp_sample(t - delay, waveform);
            }
        }
    }

    if (noise_power_w > 0.0) {
        Rng rng(mix_seed(seed, 0x5e2aULL), rho);
        const double s = std::sqrt(noise_power_w / 2.0);
        for (auto& v : echo.data) v += std::complex<double>{s * rng.normal(), s * rng.normal()};
    }
    return echo;
}

RdtCube stft_rdt(const EchoMatrix& echo, const std::vector<double>& window,
                 std::size_t overlap) {
    const std::size_t w_len = window.size();
    const std::size_t chirps = echo.chirps;
    if (w_len < 2 || overlap >= w_len)
        throw std::invalid_argument("stft_rdt: need window length > overlap");
    if (chirps < w_len)
        throw std::invalid_argument("stft_rdt: fewer chirps than the window length");
    const std::size_t hop = w_len - overlap;
    if ((chirps - overlap) % hop != 0)
        throw std::invalid_argument(
            "stft_rdt: (M - Q) must be divisible by (W - Q); got M = " +
            std::to_string(chirps) + ", W = " + std::to_string(w_len) +
            ", Q = " + std::to_string(overlap));

    RdtCube cube;
    cube.range_bins = echo.samples_per_chirp;
    cube.freq_bins = w_len;
    cube.cols = (chirps - overlap) / hop;
    cube.frame_index = echo.frame_index;
    cube.overlap = overlap;
    cube.data.assign(cube.range_bins * cube.freq_bins * cube.cols, {0.0, 0.0});

    // precompute DFT twiddles for the window length
    std::vector<std::complex<double>> twiddle(w_len * w_len);
    for (std::size_t f = 0; f < w_len; ++f)
        for (std::size_t w = 0; w < w_len; ++w) {
            const double ang =
                -2.0 * kPi * static_cast<double>(f) * static_cast<double>(w) /
                static_cast<double>(w_len);
            twiddle[f * w_len + w] = {std::cos(ang), std::sin(ang)};
        }

    std::vector<std::complex<double>> segment(w_len);
    for (std::size_t r = 0; r < cube.range_bins; ++r) {
        for (std::size_t col = 0; col < cube.cols; ++col) {
            const std::size_t start = col * hop;
            for (std::size_t w = 0; w < w_len; ++w)
                segment[w] = echo.at(r, start + w) * window[w];
            for (std::size_t f = 0; f < w_len; ++f) {
                std::complex<double> acc{0.0, 0.0};
                const auto* tw = &twiddle[f * w_len];
                for (std::size_t w = 0; w < w_len; ++w) acc += segment[w] * tw[w];
                cube.at(r, f, col) = acc;
            }
        }
    }
    return cube;
}

SpectrogramFrame integrate_spectrogram(const RdtCube& cube) {
    if (cube.data.empty()) throw std::invalid_argument("integrate_spectrogram: empty cube");
    SpectrogramFrame frame;
    frame.rows = cube.freq_bins;
    frame.cols = cube.cols;
    frame.frame_index = cube.frame_index;
    frame.window_len = cube.freq_bins;
    frame.overlap = cube.overlap;
    frame.values.assign(frame.rows * frame.cols, 0.0);
    for (std::size_t r = 0; r < cube.range_bins; ++r)
        for (std::size_t f = 0; f < cube.freq_bins; ++f)
            for (std::size_t m = 0; m < cube.cols; ++m)
                frame.at(f, m) += std::abs(cube.at(r, f, m));
    return frame;
}

double psnr_db(const SpectrogramFrame& reference, const SpectrogramFrame& test) {
    if (reference.rows != test.rows || reference.cols != test.cols)
        throw std::invalid_argument("psnr_db: frame dimensions differ");
    if (reference.values.empty())
        throw std::invalid_argument("psnr_db: empty frames");
    double peak = 0.0;
    for (double v : reference.values) peak = std::max(peak, v);
    if (peak <= 0.0)
        throw std::domain_error("psnr_db: reference frame is identically zero");
    double mse = 0.0;
    for (std::size_t i = 0; i < reference.values.size(); ++i) {
        const double d = reference.values[i] - test.values[i];
        mse += d * d;
    }
    mse /= static_cast<double>(reference.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

std::size_t dominant_doppler_bin(const SpectrogramFrame& frame) {
    std::size_t best = 0;
    double best_energy = -1.0;
    for (std::size_t f = 0; f < frame.rows; ++f) {
        double acc = 0.0;
        for (std::size_t m = 0; m < frame.cols; ++m) acc += frame.at(f, m);
        if (acc > best_energy) {
            best_energy = acc;
            best = f;
        }
    }
    return best;
}

ScattererTrack make_motion_track(double base_distance_m, std::size_t scatterers,
                                 double osc_amplitude_m, double osc_freq_hz,
                                 std::uint64_t seed) {
    if (scatterers == 0)
        throw std::invalid_argument("make_motion_track: need at least one scatterer");
    ScattererTrack track;
    track.scatterers.resize(scatterers);
    Rng rng(mix_seed(seed, 0x77acULL), 0);
    for (std::size_t l = 0; l < scatterers; ++l) {
        auto& sc = track.scatterers[l];
        // torso plus limbs: the first return is strong and steady, the rest
        // oscillate at staggered rates. Offsets are absolute so the relative
        // carrier phases, and with them the spectrogram shape, do not depend
        // on the base distance.
        sc.base_distance_m = base_distance_m + 0.5 * static_cast<double>(l);
        sc.osc_amplitude_m = l == 0 ? 0.25 * osc_amplitude_m : osc_amplitude_m;
        sc.osc_freq_hz = osc_freq_hz * (1.0 + 0.5 * static_cast<double>(l));
        sc.osc_phase_rad = rng.uniform(0.0, 2.0 * kPi);
        sc.amplitude = l == 0 ? 1.0 : 0.5;
        sc.radial_velocity_mps = 0.0;
    }
    return track;
}

std::vector<SweepPoint> elevation_sweep(
    const std::function<ScattererTrack(double base_distance_m)>& track_generator,
    const SweepSettings& settings, const SensingWaveform& waveform,
    std::uint64_t seed) {
    if (settings.angles_deg.empty())
        throw std::invalid_argument("elevation_sweep: no angles");
    for (double a : settings.angles_deg)
        if (!(a > 0.0 && a <= 90.0))
            throw std::domain_error("elevation_sweep: angles must be in (0, 90]");
    if (settings.frames == 0)
        throw std::invalid_argument("elevation_sweep: need at least one frame");

    const auto window = make_window(settings.window, settings.window_len);

    // noise stream keyed on the angle so that 90 degrees reproduces the
    // reference frames exactly
    auto frame_at = [&](double angle_deg, std::size_t frame) {
        const double base = settings.altitude_m / std::sin(deg_to_rad(angle_deg));
        const ScattererTrack track = track_generator(base);
        const std::uint64_t noise_seed =
            mix_seed(seed, static_cast<std::uint64_t>(std::llround(angle_deg * 1000.0)));
        const EchoMatrix echo =
            synth_echo(track, waveform, settings.noise_power_w, frame + 1, noise_seed);
        return integrate_spectrogram(stft_rdt(echo, window, settings.overlap));
    };

    std::vector<SpectrogramFrame> reference(settings.frames);
    parallel_for(settings.frames, settings.threads,
                 [&](std::size_t i) { reference[i] = frame_at(90.0, i); });

    std::vector<SweepPoint> points(settings.angles_deg.size());
    parallel_for(points.size(), settings.threads, [&](std::size_t a) {
        const double angle = settings.angles_deg[a];
        double acc = 0.0;
        bool infinite = false;
        for (std::size_t i = 0; i < settings.frames; ++i) {
            const double p = psnr_db(reference[i], frame_at(angle, i));
            if (std::isinf(p))
                infinite = true;
            else
                acc += p;
        }
        points[a] = SweepPoint{angle,
                               infinite ? std::numeric_limits<double>::infinity()
                                        : acc / static_cast<double>(settings.frames),
                               settings.frames};
    });
    return points;
}

std::vector<SweepPoint> elevation_sweep(const SweepSettings& settings,
                                        const SensingWaveform& waveform,
                                        std::uint64_t seed) {
    auto generator = [&](double base) {
        return make_motion_track(base, settings.scatterers, settings.osc_amplitude_m,
                                 settings.osc_freq_hz, seed);
    };
    return elevation_sweep(generator, settings, waveform, seed);
}

}  // namespace skyfeel
