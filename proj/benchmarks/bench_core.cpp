#include <benchmark/benchmark.h>

#include "skyfeel/bbpo.hpp"
#include "skyfeel/feel.hpp"
#include "skyfeel/participation.hpp"
#include "skyfeel/sensing.hpp"

namespace {

using namespace skyfeel;

void BM_EnumerateAlpha(benchmark::State& state) {
    SensingProfile profile;
    Rng rng(3, 0);
    for (std::int64_t k = 0; k < state.range(0); ++k)
        profile.q.push_back(rng.uniform(0.2, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_alpha(profile));
}
BENCHMARK(BM_EnumerateAlpha)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

Scene bench_scene(std::size_t k_uavs) {
    Scene scene;
    scene.uav_altitude_m = 150.0;
    scene.radio.tx_power_w = {0.1};
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(k_uavs);
        scene.targets.push_back(Position{(100.0 + 10.0 * k) * std::cos(ang),
                                         (100.0 + 10.0 * k) * std::sin(ang), 0.0});
    }
    return scene;
}

void BM_SolveBandwidth(benchmark::State& state) {
    const std::size_t k_uavs = static_cast<std::size_t>(state.range(0));
    Scene scene = bench_scene(k_uavs);
    ComputeParams compute;
    SolverSettings settings;
    const double q = los_probability(75.0, scene.env_sensing);
    std::vector<Position> positions;
    std::vector<double> delta;
    for (std::size_t k = 0; k < k_uavs; ++k) {
        positions.push_back(optimal_position(q, scene.targets[k], scene));
        delta.push_back(16.0 + 8.0 * static_cast<double>(k));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(
            solve_bandwidth(delta, positions, q, scene, compute, settings));
}
BENCHMARK(BM_SolveBandwidth)->Arg(4)->Arg(8)->Arg(16);

void BM_TrainingRound(benchmark::State& state) {
    const std::size_t k_uavs = 8;
    auto task = make_task(k_uavs, 10, 0.1, std::vector<double>(k_uavs, 0.7), 5);
    RoundSetup setup;
    setup.delta.assign(k_uavs, 16.0);
    setup.q.assign(k_uavs, 0.8);
    setup.rate_bps.assign(k_uavs, 4.0e6);
    setup.eta = 0.1;
    ComputeParams compute;
    Rng rng(1, 0);
    std::vector<double> w = task.w0;
    std::vector<std::vector<double>> stale;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_round(w, stale, task, setup, compute, rng));
}
BENCHMARK(BM_TrainingRound);

void BM_EchoSynthesis(benchmark::State& state) {
    SensingWaveform wf;
    wf.chirps_per_frame = 40;
    wf.samples_per_chirp = 64;
    const auto track = make_motion_track(120.0, 3, 0.1, 2.0, 9);
    for (auto _ : state)
        benchmark::DoNotOptimize(synth_echo(track, wf, 1e-12, 1, 9));
}
BENCHMARK(BM_EchoSynthesis);

void BM_SpectrogramPipeline(benchmark::State& state) {
    SensingWaveform wf;
    wf.chirps_per_frame = 40;
    wf.samples_per_chirp = 64;
    const auto track = make_motion_track(120.0, 3, 0.1, 2.0, 9);
    const auto echo = synth_echo(track, wf, 1e-12, 1, 9);
    const auto window = make_window(WindowKind::kHann, 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_spectrogram(stft_rdt(echo, window, 8)));
}
BENCHMARK(BM_SpectrogramPipeline);

}  // namespace

BENCHMARK_MAIN();
