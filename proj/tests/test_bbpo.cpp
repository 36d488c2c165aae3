#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "skyfeel/bbpo.hpp"
#include "skyfeel/feel.hpp"

using namespace skyfeel;

namespace {

Scene toy_scene(std::size_t k_uavs, double altitude = 150.0) {
    Scene scene;
    scene.uav_altitude_m = altitude;
    scene.theta0_deg = 70.0;
    scene.radio.tx_power_w = {0.1};
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(k_uavs);
        const double radius = 120.0 + 15.0 * static_cast<double>(k);
        scene.targets.push_back(Position{radius * std::cos(ang), radius * std::sin(ang), 0.0});
    }
    return scene;
}

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

std::vector<Position> positions_at(double theta_deg, const Scene& scene) {
    std::vector<Position> out;
    const double q = los_probability(theta_deg, scene.env_sensing);
    for (const auto& target : scene.targets)
        out.push_back(optimal_position(q, target, scene));
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("bbpo");

TEST_CASE("bandwidth: single UAV gets the whole band") {
    Scene scene = toy_scene(1);
    ComputeParams compute;
    SolverSettings settings;
    const double q = los_probability(75.0, scene.env_sensing);
    const auto positions = positions_at(75.0, scene);
    const auto sol = solve_bandwidth({32.0}, positions, q, scene, compute, settings);
    CHECK(sol.bandwidth_hz[0] == doctest::Approx(scene.radio.total_bandwidth_hz).epsilon(1e-9));
    const double rate = uplink_rate(positions[0], sol.bandwidth_hz[0], scene, 0);
    CHECK(sol.t_max_s == doctest::Approx(expected_round_latency(32.0, q, rate, compute))
                             .epsilon(1e-9));
}

TEST_CASE("bandwidth: symmetric UAVs split equally, equalization holds") {
    Scene scene = toy_scene(1);
    scene.targets = {Position{130.0, 0.0, 0.0}, Position{-130.0, 0.0, 0.0}};
    ComputeParams compute;
    SolverSettings settings;
    const double q = los_probability(75.0, scene.env_sensing);
    const auto positions = positions_at(75.0, scene);
    const auto sol =
        solve_bandwidth({40.0, 40.0}, positions, q, scene, compute, settings);
    CHECK(sol.bandwidth_hz[0] == doctest::Approx(sol.bandwidth_hz[1]).epsilon(1e-9));
    CHECK(sol.bandwidth_hz[0] ==
          doctest::Approx(scene.radio.total_bandwidth_hz / 2.0).epsilon(1e-9));
}

TEST_CASE("bandwidth: heterogeneous batches equalize latencies at minimal T") {
    Scene scene = toy_scene(3);
    ComputeParams compute;
    SolverSettings settings;
    const double q = los_probability(78.0, scene.env_sensing);
    const auto positions = positions_at(78.0, scene);
    const std::vector<double> delta{16.0, 48.0, 80.0};
    const auto sol = solve_bandwidth(delta, positions, q, scene, compute, settings);

    double b_sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double rate = uplink_rate(positions[k], sol.bandwidth_hz[k], scene, k);
        const double lat = expected_round_latency(delta[k], q, rate, compute);
        CHECK(lat == doctest::Approx(sol.t_max_s).epsilon(1e-7));
        b_sum += sol.bandwidth_hz[k];
    }
    CHECK(b_sum == doctest::Approx(scene.radio.total_bandwidth_hz).epsilon(1e-9));

    // minimality: shaving 1% off T_max overflows the band budget
    const double target = sol.t_max_s * 0.99;
    double needed = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double fixed = sensing_time(delta[k], compute) +
                             q * compute_time(delta[k], true, compute);
        const double rate_req = q * compute.payload_bits / (target - fixed);
        // invert the rate numerically for the oracle
        double lo = 1.0, hi = scene.radio.total_bandwidth_hz * 4.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (uplink_rate(positions[k], mid, scene, k) < rate_req)
                lo = mid;
            else
                hi = mid;
        }
        needed += hi;
    }
    CHECK(needed > scene.radio.total_bandwidth_hz);
}

TEST_CASE("bandwidth: K = 8 matches an independent KKT solve") {
    // oracle route: Newton inversion of each rate equation plus a secant on
    // the shared latency so that the bandwidths exhaust the budget; this
    // reimplements the stationarity system rather than the bisection path
    Scene scene = toy_scene(8);
    ComputeParams compute;
    SolverSettings settings;
    const double q = los_probability(72.0, scene.env_sensing);
    const auto positions = positions_at(72.0, scene);
    std::vector<double> delta;
    for (std::size_t k = 0; k < 8; ++k) delta.push_back(12.0 + 9.0 * static_cast<double>(k));

    const auto sol = solve_bandwidth(delta, positions, q, scene, compute, settings);

    const double b_c = scene.radio.total_bandwidth_hz;
    const double ln2 = std::log(2.0);
    std::vector<double> snr_scale(8), fixed(8);
    for (std::size_t k = 0; k < 8; ++k) {
        snr_scale[k] = scene.tx_power_w(k) * channel_gain(positions[k], scene) /
                       scene.radio.noise_psd_w_per_hz;
        fixed[k] = sensing_time(delta[k], compute) + q * compute_time(delta[k], true, compute);
    }
    auto bandwidth_for = [&](std::size_t k, double t) {
        const double rate_req = q * compute.payload_bits / (t - fixed[k]);
        double b = b_c / 8.0;  // Newton on f(B) = B log2(1 + s/B) - rate_req
        for (int it = 0; it < 200; ++it) {
            const double s = snr_scale[k];
            const double f = b * std::log2(1.0 + s / b) - rate_req;
            const double df = std::log2(1.0 + s / b) - s / (ln2 * (b + s));
            const double step = f / df;
            b -= step;
            if (b <= 0.0) b = 1.0;
            if (std::abs(step) <= 1e-12 * b) break;
        }
        return b;
    };
    auto excess = [&](double t) {
        double total = 0.0;
        for (std::size_t k = 0; k < 8; ++k) total += bandwidth_for(k, t);
        return total - b_c;
    };
    // secant iteration on the common latency
    double t0 = sol.t_max_s * 1.2, t1 = sol.t_max_s * 0.8, f0 = excess(t0), f1 = excess(t1);
    for (int it = 0; it < 100 && std::abs(f1) > 1e-6; ++it) {
        const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        t0 = t1;
        f0 = f1;
        t1 = t2;
        f1 = excess(t1);
    }
    CHECK(sol.t_max_s == doctest::Approx(t1).epsilon(1e-3));
}

TEST_CASE("batch size: noise-free collapse to the minimum batch") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    SolverSettings settings;
    LearningConstants consts = toy_constants(2);
    consts.sigma2.assign(2, 0.0);
    const double q = los_probability(80.0, scene.env_sensing);
    const auto positions = positions_at(80.0, scene);
    const std::vector<double> bandwidth(2, scene.radio.total_bandwidth_hz / 2.0);

    const auto sol = solve_batchsize(positions, bandwidth, q, 500, consts, scene, compute,
                                     settings);
    // with no gradient noise the gap equation ignores delta: the floor binds
    const double min_delta = *std::min_element(sol.delta.begin(), sol.delta.end());
    CHECK(min_delta == doctest::Approx(settings.delta_min).epsilon(1e-9));
}

TEST_CASE("batch size: equal-latency optimality for every UAV") {
    Scene scene = toy_scene(3);
    ComputeParams compute;
    SolverSettings settings;
    LearningConstants consts = toy_constants(3);
    const double q = los_probability(75.0, scene.env_sensing);
    const auto positions = positions_at(75.0, scene);
    const std::vector<double> bandwidth{1.5e6, 2.5e6, 2.0e6};

    const auto sol = solve_batchsize(positions, bandwidth, q, 400, consts, scene, compute,
                                     settings);
    for (std::size_t k = 0; k < 3; ++k) {
        const double rate = uplink_rate(positions[k], bandwidth[k], scene, k);
        const double lat = expected_round_latency(sol.delta[k], q, rate, compute);
        CHECK(lat == doctest::Approx(sol.t_max_s).epsilon(1e-8));
    }

    // the gap equation holds with equality: Phi(N) = epsilon
    const double a = contraction_factor(consts);
    const double q_min = los_probability(scene.theta0_deg, scene.env_sensing);
    const double g = g_uniform_bound(consts, sol.delta, q, q_min);
    CHECK(phi(400, a, g, consts.initial_gap) == doctest::Approx(consts.epsilon).epsilon(1e-6));
}

TEST_CASE("batch size: infeasible N reported") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    SolverSettings settings;
    LearningConstants consts = toy_constants(2);
    const double q = los_probability(75.0, scene.env_sensing);
    const auto positions = positions_at(75.0, scene);
    const std::vector<double> bandwidth(2, 3.0e6);
    CHECK_THROWS_AS(solve_batchsize(positions, bandwidth, q, 1, consts, scene, compute,
                                    settings),
                    InfeasiblePlan);
}

TEST_CASE("position: theta0 bound binds when heterogeneity is negligible") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    SolverSettings settings;
    LearningConstants consts = toy_constants(2);
    consts.lambda2.assign(2, 0.0);
    const std::vector<double> delta(2, 64.0);
    const std::vector<double> bandwidth(2, 3.0e6);

    const auto sol = solve_position(delta, bandwidth, 2000, consts, scene, compute,
                                    settings);
    const double q_theta0 = los_probability(scene.theta0_deg, scene.env_sensing);
    CHECK(sol.q_s == doctest::Approx(q_theta0).epsilon(1e-12));
    CHECK(sol.theta_s_deg == doctest::Approx(scene.theta0_deg).epsilon(1e-9));
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(elevation_angle_deg(sol.positions[k], scene.targets[k]) ==
              doctest::Approx(sol.theta_s_deg).epsilon(1e-8));

    // latency matches the stated maximum composition
    double expected_t = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        const double rate = uplink_rate(sol.positions[k], bandwidth[k], scene, k);
        expected_t = std::max(expected_t,
                              expected_round_latency(delta[k], sol.q_s, rate, compute));
    }
    CHECK(sol.t_max_s == doctest::Approx(expected_t).epsilon(1e-12));
}

TEST_CASE("position: gap bound can exceed the theta0 bound") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    SolverSettings settings;
    LearningConstants consts = toy_constants(2);
    consts.sigma2.assign(2, 2.727);  // heavy gradient noise pushes q_s up
    consts.lambda2.assign(2, 0.0);
    const std::vector<double> delta(2, 200.0);
    const std::vector<double> bandwidth(2, 3.0e6);

    const auto sol =
        solve_position(delta, bandwidth, 2000, consts, scene, compute, settings);
    const double q_theta0 = los_probability(scene.theta0_deg, scene.env_sensing);
    const double q_ceiling = los_probability(90.0, scene.env_sensing);
    CHECK(sol.q_s > q_theta0);
    CHECK(sol.q_s <= q_ceiling);

    // the returned q_s solves the uniform G budget with equality
    const double a = contraction_factor(consts);
    const double rhs = (1.0 - a) * (consts.epsilon - consts.initial_gap * std::pow(a, 2000)) /
                       (1.0 - std::pow(a, 2000));
    const double g = g_uniform_bound(consts, delta, sol.q_s, q_theta0);
    CHECK(g == doctest::Approx(rhs).epsilon(1e-6));

    // demanding even the ceiling cannot satisfy: infeasible at this N
    consts.sigma2.assign(2, 50.0);
    CHECK_THROWS_AS(solve_position(delta, bandwidth, 2000, consts, scene, compute, settings),
                    InfeasiblePlan);
}

TEST_CASE("run_bbpo: plan is feasible, equalized, and integer") {
    Scene scene = toy_scene(3);
    ComputeParams compute;
    SolverSettings settings;
    settings.n_sweep = NSweepMode::kGeometric;
    settings.n_max = 1200;
    LearningConstants consts = toy_constants(3);

    const auto plan = run_bbpo(scene, consts, compute, settings);
    const auto audit = audit_plan(plan, scene, consts, compute, settings);
    for (const auto& v : audit.violations) MESSAGE(v);
    CHECK(audit.feasible);
    CHECK(audit.latency_ratio <= 1.0 + 10.0 * settings.tol_tmax_s);
    for (double d : plan.delta) {
        CHECK(d >= 1.0);
        CHECK(d == doctest::Approx(std::round(d)));
    }
    CHECK(plan.objective_s ==
          doctest::Approx(static_cast<double>(plan.n_rounds) * plan.t_max_s));
}

TEST_CASE("run_bbpo: huge tau runs exactly one alternation pass") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    LearningConstants consts = toy_constants(2);

    SolverSettings one_shot;
    one_shot.tol_tmax_s = 1e9;  // stop after the first pass
    one_shot.n_sweep = NSweepMode::kGeometric;
    one_shot.n_max = 900;

    const auto plan = run_bbpo(scene, consts, compute, one_shot);

    // replicate the single pass by hand at the chosen N
    const std::size_t n = plan.n_rounds;
    std::vector<double> delta(2, one_shot.delta_init);
    const double q = los_probability(scene.theta0_deg, scene.env_sensing);
    const auto positions = positions_at(scene.theta0_deg, scene);

    auto b = solve_bandwidth(delta, positions, q, scene, compute, one_shot);
    auto d = solve_batchsize(positions, b.bandwidth_hz, q, n, consts, scene, compute,
                             one_shot);
    auto u = solve_position(d.delta, b.bandwidth_hz, n, consts, scene, compute, one_shot);
    std::vector<double> ceiled(2);
    for (std::size_t k = 0; k < 2; ++k) ceiled[k] = std::ceil(d.delta[k] - 1e-9);
    auto rebalanced = solve_bandwidth(ceiled, u.positions, u.q_s, scene, compute, one_shot);

    CHECK(plan.q_s == doctest::Approx(u.q_s).epsilon(1e-12));
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(plan.delta[k] == doctest::Approx(ceiled[k]));
    CHECK(plan.t_max_s == doctest::Approx(rebalanced.t_max_s).epsilon(1e-9));
}

TEST_CASE("run_bbpo: subproblem order is configurable") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    LearningConstants consts = toy_constants(2);
    SolverSettings settings;
    settings.n_sweep = NSweepMode::kGeometric;
    settings.n_max = 1200;
    // orders that reach the position step before the batch step need an
    // initial batch size that already satisfies the gap budget
    settings.delta_init = 128.0;
    for (const char* order : {"bdu", "dub", "ubd"}) {
        settings.subproblem_order = order;
        const auto plan = run_bbpo(scene, consts, compute, settings);
        const auto audit = audit_plan(plan, scene, consts, compute, settings);
        CHECK(audit.feasible);
    }
    settings.subproblem_order = "bbb";
    CHECK_THROWS_AS(run_bbpo(scene, consts, compute, settings), std::invalid_argument);
}

TEST_CASE("run_bbpo: infeasible epsilon names the constraint") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    SolverSettings settings;
    LearningConstants consts = toy_constants(2);
    consts.epsilon = 1e-9;  // below the bias floor
    try {
        run_bbpo(scene, consts, compute, settings);
        FAIL("expected infeasibility");
    } catch (const InfeasiblePlan& e) {
        CHECK(e.constraint() == "gap");
    }
}

TEST_CASE("baseline presets satisfy their defining restriction") {
    Scene scene = toy_scene(2);
    ComputeParams compute;
    SolverSettings settings;
    settings.n_sweep = NSweepMode::kGeometric;
    settings.n_max = 1200;
    LearningConstants consts = toy_constants(2);
    BaselineOptions options;
    options.position_elevation_deg = 80.0;
    options.fixed_delta = 48.0;

    SUBCASE("eq-bandwidth") {
        const auto plan =
            baseline_preset("eq-bandwidth", scene, consts, compute, settings, options);
        for (double b : plan.bandwidth_hz)
            CHECK(b == doctest::Approx(scene.radio.total_bandwidth_hz / 2.0));
    }
    SUBCASE("eq-batchsize") {
        const auto plan =
            baseline_preset("eq-batchsize", scene, consts, compute, settings, options);
        for (double d : plan.delta) CHECK(d == doctest::Approx(48.0));
    }
    SUBCASE("bbpo-ideal") {
        const auto plan =
            baseline_preset("bbpo-ideal", scene, consts, compute, settings, options);
        CHECK(plan.q_s == doctest::Approx(1.0));
        // positions still honor the quality constraint at the cheapest angle
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(elevation_angle_deg(plan.positions[k], scene.targets[k]) ==
                  doctest::Approx(scene.theta0_deg).epsilon(1e-8));
        const auto audit = audit_plan(plan, scene, consts, compute, settings);
        CHECK(audit.feasible);
    }
    SUBCASE("det-uavposition") {
        const auto plan = baseline_preset("det-uavposition", scene, consts, compute,
                                          settings, options);
        CHECK(plan.theta_s_deg == doctest::Approx(80.0));
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(elevation_angle_deg(plan.positions[k], scene.targets[k]) ==
                  doctest::Approx(80.0).epsilon(1e-8));
    }
    SUBCASE("unknown name") {
        CHECK_THROWS_AS(baseline_preset("nope", scene, consts, compute, settings, options),
                        std::invalid_argument);
    }
}

TEST_SUITE_END();
