#include "skyfeel/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "skyfeel/feel.hpp"
#include "skyfeel/rng.hpp"
#include "skyfeel/sensing.hpp"

namespace skyfeel {

namespace {

struct Failure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

Scene toy_scene(std::size_t k_uavs, double altitude = 150.0) {
    Scene scene;
    scene.uav_altitude_m = altitude;
    scene.theta0_deg = 70.0;
    scene.radio.tx_power_w = {0.1};
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(k_uavs);
        const double radius = 120.0 + 20.0 * static_cast<double>(k);
        scene.targets.push_back(Position{radius * std::cos(ang), radius * std::sin(ang), 0.0});
    }
    return scene;
}

// ---- weight oracles -------------------------------------------------------

void check_weight_sum(const Config&) {
    Rng rng(2024, 17);
    for (std::size_t k_uavs = 1; k_uavs <= 8; ++k_uavs) {
        for (int rep = 0; rep < 50; ++rep) {
            SensingProfile profile;
            for (std::size_t k = 0; k < k_uavs; ++k)
                profile.q.push_back(rng.uniform(0.05, 1.0));
            const auto alpha = enumerate_alpha(profile);
            double sum = 0.0;
            for (double a : alpha) sum += a;
            expect(std::abs(sum - 1.0) <= 1e-12,
                   "sum alpha = " + num(sum) + " at K = " + std::to_string(k_uavs));
        }
    }
}

void check_uniform_alpha(const Config&) {
    for (std::size_t k_uavs = 1; k_uavs <= 8; ++k_uavs) {
        for (double q = 0.1; q <= 1.0; q += 0.1) {
            SensingProfile profile;
            profile.q.assign(k_uavs, q);
            const auto alpha = enumerate_alpha(profile);
            for (double a : alpha)
                expect(std::abs(a - 1.0 / static_cast<double>(k_uavs)) <= 1e-12,
                       "alpha != 1/K at K = " + std::to_string(k_uavs) + ", q = " + num(q));
        }
    }
}

void check_beta_bound(const Config&) {
    for (std::size_t k_uavs = 2; k_uavs <= 8; ++k_uavs) {
        for (double q = 0.3; q <= 1.0 + 1e-12; q += 0.1) {
            const double qq = std::min(q, 1.0);
            SensingProfile profile;
            profile.q.assign(k_uavs, qq);
            const auto beta = enumerate_beta(profile);
            const auto forms = uniform_closed_forms(k_uavs, qq, qq);
            for (double b : beta)
                expect(b <= forms.beta_bound + 1e-12,
                       "beta " + num(b) + " exceeds bound " + num(forms.beta_bound));
        }
    }
}

void check_m22(const Config&) {
    for (std::size_t k_uavs = 2; k_uavs <= 8; ++k_uavs) {
        for (double q = 0.3; q <= 1.0 + 1e-12; q += 0.1) {
            const double qq = std::min(q, 1.0);
            const double coeff = m22_coefficient_uniform(k_uavs, qq);
            const double bound = uniform_closed_forms(k_uavs, qq, qq).gamma_bound;
            expect(coeff <= bound + 1e-12, "m22 coefficient exceeds the gamma bound");
        }
    }
    const double pair = m22_coefficient_uniform(2, 1.0);
    const double bound = uniform_closed_forms(2, 1.0, 1.0).gamma_bound;
    expect(std::abs(pair - 1.0) <= 1e-12 && std::abs(bound - 1.0) <= 1e-12,
           "gamma pair not tight at K = 2, q = 1");
}

void check_weights_montecarlo(const Config&) {
    SensingProfile profile;
    profile.q = {0.35, 0.6, 0.8, 0.95};
    const auto alpha = enumerate_alpha(profile);
    const std::size_t k_uavs = profile.q.size();

    const std::size_t draws = 200000;
    std::vector<double> sum(k_uavs, 0.0), sum_sq(k_uavs, 0.0);
    std::size_t kept = 0;
    Rng rng(99, 5);
    std::vector<unsigned char> on(k_uavs);
    while (kept < draws) {
        std::size_t participants = 0;
        for (std::size_t k = 0; k < k_uavs; ++k) {
            on[k] = rng.bernoulli(profile.q[k]) ? 1 : 0;
            participants += on[k];
        }
        if (participants == 0) continue;
        ++kept;
        for (std::size_t k = 0; k < k_uavs; ++k) {
            const double w = on[k] ? 1.0 / static_cast<double>(participants) : 0.0;
            sum[k] += w;
            sum_sq[k] += w * w;
        }
    }
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double mean = sum[k] / static_cast<double>(draws);
        const double var =
            (sum_sq[k] / static_cast<double>(draws) - mean * mean) /
            static_cast<double>(draws);
        const double se = std::sqrt(std::max(var, 0.0));
        expect(std::abs(mean - alpha[k]) <= 3.0 * se + 1e-9,
               "alpha MC estimate off by more than 3 s.e. for UAV " + std::to_string(k));
    }
}

// ---- channel / geometry oracles -------------------------------------------

void check_los_monotone(const Config& cfg) {
    const Environment env = cfg.scene.env_sensing;
    double prev = los_probability(0.0, env);
    for (int deg = 1; deg <= 90; ++deg) {
        const double cur = los_probability(static_cast<double>(deg), env);
        expect(cur > prev, "los_probability not strictly increasing at " +
                               std::to_string(deg) + " deg");
        prev = cur;
    }
}

void check_theta_roundtrip(const Config& cfg) {
    const Environment env = cfg.scene.env_sensing;
    for (int deg = 1; deg <= 89; ++deg) {
        const double theta = static_cast<double>(deg);
        const double back = theta_from_qs(los_probability(theta, env), env);
        expect(std::abs(back - theta) <= 1e-8,
               "roundtrip error " + num(back - theta) + " deg at " + num(theta));
    }
}

void check_position_grid(const Config&) {
    Scene scene = toy_scene(1, 100.0);
    scene.targets = {Position{100.0, 40.0, 0.0}};
    const double q = los_probability(70.0, scene.env_sensing);
    const Position u_star = optimal_position(q, scene.targets[0], scene);
    const double rate_star = uplink_rate(u_star, 1.0e6, scene);

    // same-theta candidates form a circle around the target; sample it densely
    const double standoff = scene.uav_altitude_m / std::tan(deg_to_rad(70.0));
    const std::size_t grid = std::size_t{201} * 201;
    for (std::size_t i = 0; i < grid; ++i) {
        const double az = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(grid);
        const Position cand{scene.targets[0].x + standoff * std::cos(az),
                            scene.targets[0].y + standoff * std::sin(az),
                            scene.uav_altitude_m};
        const double rate = uplink_rate(cand, 1.0e6, scene);
        expect(rate_star >= rate * (1.0 - 1e-9),
               "grid candidate beats the closed-form placement at azimuth " + num(az));
    }
}

void check_rate_monotone(const Config&) {
    Scene scene = toy_scene(1, 100.0);
    scene.targets = {Position{300.0, 0.0, 0.0}};
    double prev = std::numeric_limits<double>::infinity();
    for (double q = 0.30; q <= 0.99 + 1e-9; q += 0.01) {
        const double r = rate_given_qs(q, 1.0e6, scene.targets[0], scene);
        expect(r < prev, "rate_given_qs not strictly decreasing at q = " + num(q));
        prev = r;
    }
}

// ---- convergence oracles ---------------------------------------------------

void check_phi_recursion(const Config&) {
    const double contraction_a = 0.9375, g = 0.01, lambda0 = 1.0;
    double unrolled = lambda0;
    for (std::size_t n = 1; n <= 64; ++n) {
        unrolled = contraction_a * unrolled + g;
        const double direct = phi(n, contraction_a, g, lambda0);
        expect(std::abs(direct - unrolled) <= 1e-12 * std::max(1.0, unrolled),
               "phi diverges from the unrolled recursion at n = " + std::to_string(n));
    }
}

void check_min_rounds(const Config&) {
    const double contraction_a = 0.9, g_max = 0.001, lambda0 = 1.0, epsilon = 0.05;
    const std::size_t n_min = min_rounds(epsilon, contraction_a, lambda0, g_max);
    expect(n_min == 31, "expected N_min = 31, got " + std::to_string(n_min));
    expect(phi(n_min, contraction_a, g_max, lambda0) <= epsilon,
           "phi(N_min) misses epsilon");
    expect(phi(n_min - 1, contraction_a, g_max, lambda0) > epsilon,
           "phi(N_min - 1) already satisfies epsilon; N_min not minimal");
}

// ---- solver oracles ---------------------------------------------------------

LearningConstants toy_constants(std::size_t k_uavs) {
    LearningConstants c;
    c.eta = 0.1;
    c.smoothness_l = 1.0;
    c.strong_convexity_mu = 0.5;
    c.sigma2.assign(k_uavs, 0.5);
    c.lambda2.assign(k_uavs, 0.001);
    c.initial_gap = 1.0;
    c.epsilon = 0.05;
    return c;
}

void check_bandwidth_grid(const Config&) {
    SolverSettings settings;
    ComputeParams compute;
    for (std::size_t k_uavs = 2; k_uavs <= 3; ++k_uavs) {
        Scene scene = toy_scene(k_uavs);
        scene.radio.total_bandwidth_hz = 6.0e6;
        std::vector<double> delta;
        for (std::size_t k = 0; k < k_uavs; ++k)
            delta.push_back(24.0 + 16.0 * static_cast<double>(k));
        std::vector<Position> positions;
        const double q = los_probability(75.0, scene.env_sensing);
        for (std::size_t k = 0; k < k_uavs; ++k)
            positions.push_back(optimal_position(q, scene.targets[k], scene));

        const auto sol = solve_bandwidth(delta, positions, q, scene, compute, settings);

        auto latency_max = [&](const std::vector<double>& bands) {
            double worst = 0.0;
            for (std::size_t k = 0; k < k_uavs; ++k) {
                const double r = uplink_rate(positions[k], bands[k], scene, k);
                worst = std::max(worst, expected_round_latency(delta[k], q, r, compute));
            }
            return worst;
        };

        double best = std::numeric_limits<double>::infinity();
        const double b_c = scene.radio.total_bandwidth_hz;
        if (k_uavs == 2) {
            const std::size_t points = 10000;
            for (std::size_t i = 1; i < points; ++i) {
                const double b1 = b_c * static_cast<double>(i) / static_cast<double>(points);
                best = std::min(best, latency_max({b1, b_c - b1}));
            }
        } else {
            // coarse simplex grid, then one local refinement pass around the
            // winner so grid resolution stays below the comparison tolerance
            const std::size_t side = 100;
            double best_b1 = 0.0, best_b2 = 0.0;
            for (std::size_t i = 1; i < side; ++i)
                for (std::size_t j = 1; j < side; ++j) {
                    const double b1 = b_c * static_cast<double>(i) / static_cast<double>(side);
                    const double b2 = b_c * static_cast<double>(j) / static_cast<double>(side);
                    if (b1 + b2 >= b_c) continue;
                    const double t = latency_max({b1, b2, b_c - b1 - b2});
                    if (t < best) {
                        best = t;
                        best_b1 = b1;
                        best_b2 = b2;
                    }
                }
            const double step = b_c / static_cast<double>(side);
            for (int i = -50; i <= 50; ++i)
                for (int j = -50; j <= 50; ++j) {
                    const double b1 = best_b1 + step * static_cast<double>(i) / 50.0;
                    const double b2 = best_b2 + step * static_cast<double>(j) / 50.0;
                    if (b1 <= 0.0 || b2 <= 0.0 || b1 + b2 >= b_c) continue;
                    best = std::min(best, latency_max({b1, b2, b_c - b1 - b2}));
                }
        }
        expect(sol.t_max_s <= best * 1.001,
               "bandwidth solver worse than grid search: " + num(sol.t_max_s) + " vs " + num(best));
        expect(best <= sol.t_max_s * 1.001,
               "bandwidth solver suspiciously better than a feasible grid point: " + num(sol.t_max_s) +
                   " vs " + num(best));
    }
}

void check_batchsize_closed_form(const Config&) {
    // single UAV: the gap equation has an algebraic solution
    Scene scene = toy_scene(1);
    scene.targets = {Position{150.0, 0.0, 0.0}};
    LearningConstants consts;
    consts.eta = 0.01;
    consts.smoothness_l = 1.0;
    consts.strong_convexity_mu = 1.0;
    consts.sigma2 = {1.0};
    consts.lambda2 = {0.0};
    consts.initial_gap = 1.0;
    consts.epsilon = 0.5;
    const double q = 1.0;
    const std::size_t n_rounds = 100;

    ComputeParams compute;
    SolverSettings settings;
    const std::vector<Position> positions{
        Position{scene.targets[0].x, scene.targets[0].y, scene.uav_altitude_m}};
    const std::vector<double> bandwidth{scene.radio.total_bandwidth_hz};

    const auto sol = solve_batchsize(positions, bandwidth, q, n_rounds, consts, scene,
                                     compute, settings);

    const double contraction_a = 1.0 - consts.strong_convexity_mu * consts.eta *
                                           (1.0 - 4.0 * consts.smoothness_l * consts.eta);
    const double a_n = std::pow(contraction_a, static_cast<double>(n_rounds));
    const double rhs = (1.0 - contraction_a) * (consts.epsilon - a_n) / (1.0 - a_n);
    const double q_min_scene = los_probability(scene.theta0_deg, scene.env_sensing);
    const double chi = q_min_scene;  // K = 1
    const double c_sigma =
        consts.eta + 2.0 * consts.smoothness_l * consts.eta * consts.eta / (chi * q);
    const double delta_expected = c_sigma / rhs;

    expect(std::abs(sol.delta[0] - delta_expected) <= 1e-6 * delta_expected,
           "batch solver delta = " + num(sol.delta[0]) + " vs algebraic " + num(delta_expected));
    const double rate = uplink_rate(positions[0], bandwidth[0], scene, 0);
    const double t_expected = expected_round_latency(delta_expected, q, rate, compute);
    expect(std::abs(sol.t_max_s - t_expected) <= 1e-6 * t_expected,
           "batch solver latency mismatch against the algebraic solution");
}

void check_latency_montecarlo(const Config&) {
    ComputeParams compute;
    const double delta = 16.0, q = 0.7, rate = 2.0e6;
    const double expected = expected_round_latency(delta, q, rate, compute);
    Rng rng(4242, 3);
    double acc = 0.0;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
        const bool on = rng.bernoulli(q);
        acc += sensing_time(delta, compute) + compute_time(delta, on, compute) +
               upload_time(rate, on, compute);
    }
    const double mean = acc / static_cast<double>(draws);
    expect(std::abs(mean - expected) <= 0.01 * expected,
           "realized mean latency " + num(mean) + " vs expected " + num(expected));
}

void check_bbpo_exhaustive(const Config&) {
    Scene scene = toy_scene(1);
    scene.targets = {Position{150.0, 0.0, 0.0}};
    ComputeParams compute;
    LearningConstants consts = toy_constants(1);
    SolverSettings settings;
    settings.n_max = 4000;

    const auto plan = run_bbpo(scene, consts, compute, settings);

    // exhaustive oracle over integer batch sizes, a dense q grid, and the
    // minimal round count implied by the uniform G bound
    const double q_lo = los_probability(scene.theta0_deg, scene.env_sensing);
    const double q_hi = los_probability(90.0, scene.env_sensing);
    const double contraction_a = contraction_factor(consts);
    const double q_min_scene = q_lo;
    double best = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= 64; ++d) {
        for (int qi = 0; qi < 200; ++qi) {
            const double q = q_lo + (q_hi - q_lo) * static_cast<double>(qi) / 199.0;
            const std::vector<double> delta{static_cast<double>(d)};
            const double g = g_uniform_bound(consts, delta, q, q_min_scene);
            std::size_t n_need;
            try {
                n_need = std::max<std::size_t>(
                    1, min_rounds(consts.epsilon, contraction_a, consts.initial_gap, g));
            } catch (const InfeasibleBound&) {
                continue;
            }
            if (n_need > settings.n_max) continue;
            const double rate = rate_given_qs(q, scene.radio.total_bandwidth_hz,
                                              scene.targets[0], scene, 0);
            const double t = expected_round_latency(delta[0], q, rate, compute);
            best = std::min(best, static_cast<double>(n_need) * t);
        }
    }
    expect(std::isfinite(best), "exhaustive oracle found no feasible point");
    expect(plan.objective_s <= best * 1.01 && best <= plan.objective_s * 1.01,
           "BBPO objective " + num(plan.objective_s) + " vs exhaustive " + num(best));
}

// ---- sensing oracles ---------------------------------------------------------

void check_doppler_bin(const Config&) {
    SensingWaveform wf;
    wf.carrier_hz = 6.0e10;
    wf.chirp_s = 2.5e-4;
    wf.chirps_per_frame = 72;
    wf.samples_per_chirp = 16;
    const std::size_t w_len = 64, overlap = 56;
    const auto window = make_window(WindowKind::kHann, w_len);

    for (double v : {0.5, 1.0, 2.0}) {
        ScattererTrack track;
        Scatterer sc;
        sc.base_distance_m = 120.0;
        sc.radial_velocity_mps = -v;  // approaching: positive Doppler
        sc.amplitude = 1.0;
        track.scatterers = {sc};
        const auto echo = synth_echo(track, wf, 0.0, 1, 1);
        const auto frame = integrate_spectrogram(stft_rdt(echo, window, overlap));
        const double doppler_hz = 2.0 * v * wf.carrier_hz / kSpeedOfLight;
        const auto expected = static_cast<long>(
            std::llround(doppler_hz * wf.chirp_s * static_cast<double>(w_len)));
        const long got = static_cast<long>(dominant_doppler_bin(frame));
        expect(std::abs(got - expected) <= 1,
               "Doppler ridge at bin " + std::to_string(got) + ", expected " +
                   std::to_string(expected) + " for v = " + num(v));
    }
}

void check_stft_basics(const Config&) {
    // DC input concentrates in bin 0 under a rectangular window
    SensingWaveform wf;
    wf.chirps_per_frame = 16;
    wf.samples_per_chirp = 4;
    EchoMatrix echo;
    echo.samples_per_chirp = 4;
    echo.chirps = 16;
    echo.data.assign(std::size_t{4} * 16, {1.0, 0.0});
    const auto rect = make_window(WindowKind::kRect, 8);
    const auto cube = stft_rdt(echo, rect, 0);
    for (std::size_t f = 1; f < cube.freq_bins; ++f)
        expect(std::abs(cube.at(0, f, 0)) <= 1e-10, "DC leakage into bin " + std::to_string(f));
    expect(std::abs(cube.at(0, 0, 0) - std::complex<double>{8.0, 0.0}) <= 1e-10,
           "DC bin magnitude wrong");

    // linearity
    EchoMatrix a = echo, b = echo;
    Rng rng(7, 7);
    for (auto& v : a.data) v = {rng.normal(), rng.normal()};
    for (auto& v : b.data) v = {rng.normal(), rng.normal()};
    EchoMatrix combo = a;
    for (std::size_t i = 0; i < combo.data.size(); ++i)
        combo.data[i] = 2.0 * a.data[i] + 3.0 * b.data[i];
    const auto hann = make_window(WindowKind::kHann, 8);
    const auto ca = stft_rdt(a, hann, 0), cb = stft_rdt(b, hann, 0),
               cc = stft_rdt(combo, hann, 0);
    for (std::size_t i = 0; i < cc.data.size(); ++i)
        expect(std::abs(cc.data[i] - (2.0 * ca.data[i] + 3.0 * cb.data[i])) <= 1e-9,
               "STFT not linear");
}

void check_psnr(const Config&) {
    SpectrogramFrame ref;
    ref.rows = 8;
    ref.cols = 4;
    ref.values.assign(32, 0.0);
    Rng rng(11, 2);
    for (auto& v : ref.values) v = rng.uniform(0.0, 1.0);
    double peak = 0.0;
    for (double v : ref.values) peak = std::max(peak, v);

    SpectrogramFrame test = ref;
    for (auto& v : test.values) v += peak / 100.0;
    const double p = psnr_db(ref, test);
    expect(std::abs(p - 40.0) <= 1e-9, "uniform peak/100 offset should give 40 dB, got " + num(p));
    expect(std::isinf(psnr_db(ref, ref)), "identical frames should give +inf");
}

}  // namespace

std::vector<CheckResult> run_verification(const Config& config, unsigned threads) {
    (void)threads;
    using CheckFn = std::function<void(const Config&)>;
    const std::vector<std::pair<std::string, CheckFn>> checks = {
        {"weights-sum-identity", check_weight_sum},
        {"weights-uniform-alpha", check_uniform_alpha},
        {"weights-beta-bound", check_beta_bound},
        {"weights-m22-coefficient", check_m22},
        {"weights-montecarlo", check_weights_montecarlo},
        {"los-strictly-increasing", check_los_monotone},
        {"theta-qs-roundtrip", check_theta_roundtrip},
        {"position-vs-grid", check_position_grid},
        {"rate-decreasing-in-qs", check_rate_monotone},
        {"phi-vs-recursion", check_phi_recursion},
        {"min-rounds-consistency", check_min_rounds},
        {"bandwidth-vs-grid", check_bandwidth_grid},
        {"batchsize-closed-form", check_batchsize_closed_form},
        {"latency-montecarlo", check_latency_montecarlo},
        {"bbpo-vs-exhaustive", check_bbpo_exhaustive},
        {"doppler-bin-placement", check_doppler_bin},
        {"stft-dc-and-linearity", check_stft_basics},
        {"psnr-reference-values", check_psnr},
    };

    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto& [name, fn] : checks) {
        CheckResult r;
        r.name = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            fn(config);
            r.passed = true;
            r.detail = "ok";
        } catch (const Failure& f) {
            r.passed = false;
            r.detail = f.detail;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace skyfeel
