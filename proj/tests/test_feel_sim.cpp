#include <doctest.h>

#include <cmath>

#include "skyfeel/convergence.hpp"
#include "skyfeel/feel.hpp"

using namespace skyfeel;

namespace {

RoundSetup plain_setup(std::size_t k_uavs, double delta, double q, double eta) {
    RoundSetup s;
    s.delta.assign(k_uavs, delta);
    s.q.assign(k_uavs, q);
    s.rate_bps.assign(k_uavs, 4.0e6);
    s.eta = eta;
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("feel_sim");

TEST_CASE("make_task invariants") {
    SUBCASE("zero heterogeneity means zero lambda") {
        const auto task = make_task(4, 6, 0.0, std::vector<double>(4, 1.0), 3);
        for (double l2 : task.lambda2) CHECK(l2 == doctest::Approx(0.0));
        CHECK(task.initial_gap == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("uniform heterogeneity is exact") {
        const auto task = make_task(5, 8, 0.3, std::vector<double>(5, 0.5), 11, 2.0, 0.8);
        for (double l2 : task.lambda2) CHECK(l2 == doctest::Approx(0.09).epsilon(1e-10));
        CHECK(task.smoothness_l == doctest::Approx(2.0));
        CHECK(task.strong_convexity_mu == doctest::Approx(0.8));
    }
    SUBCASE("same seed reproduces the task") {
        const auto a = make_task(3, 5, 0.2, std::vector<double>(3, 1.0), 42);
        const auto b = make_task(3, 5, 0.2, std::vector<double>(3, 1.0), 42);
        CHECK(a.centers == b.centers);
        CHECK(a.w0 == b.w0);
    }
    SUBCASE("hand-built two-UAV task") {
        SyntheticTask task;
        task.num_uavs = 2;
        task.dim = 2;
        task.h_diag = {{1.0, 1.0}, {1.0, 1.0}};
        task.centers = {{1.0, 0.0}, {-1.0, 0.0}};
        task.sigma = {0.0, 0.0};
        task.w0 = {0.5, 0.0};
        task.finalize();
        CHECK(task.w_star[0] == doctest::Approx(0.0));
        CHECK(task.w_star[1] == doctest::Approx(0.0));
        CHECK(task.smoothness_l == doctest::Approx(1.0));
        CHECK(task.lambda2[0] == doctest::Approx(1.0));  // |H (w* - c_k)|^2 = 1
        CHECK(task.lambda2[1] == doctest::Approx(1.0));
        // F(w*) = (1/2)(1/2 + 1/2) = 1/2, gap(w0) = 0.5^2 / 2
        CHECK(task.f_star == doctest::Approx(0.5));
        CHECK(task.initial_gap == doctest::Approx(0.125));
    }
}

TEST_CASE("run_round: deterministic full participation is plain GD") {
    auto task = make_task(3, 4, 0.2, std::vector<double>(3, 0.0), 1);
    auto setup = plain_setup(3, 8.0, 1.0, 0.1);
    std::vector<double> w = task.w0;
    std::vector<std::vector<double>> stale;
    ComputeParams compute;
    Rng rng(9, 0);
    const auto out = run_round(w, stale, task, setup, compute, rng);
    CHECK(out.participants == 3);
    std::vector<double> grad(task.dim, 0.0), gk;
    for (std::size_t k = 0; k < 3; ++k) {
        task.local_grad(k, task.w0, gk);
        for (std::size_t i = 0; i < task.dim; ++i) grad[i] += gk[i] / 3.0;
    }
    for (std::size_t i = 0; i < task.dim; ++i)
        CHECK(w[i] == doctest::Approx(task.w0[i] - 0.1 * grad[i]).epsilon(1e-14));
}

TEST_CASE("run_round: single participant takes that UAV's gradient") {
    auto task = make_task(2, 3, 0.4, std::vector<double>(2, 0.0), 5);
    RoundSetup setup = plain_setup(2, 8.0, 0.0, 0.05);
    setup.q = {1e-15, 1.0};  // only UAV 1 participates in practice
    std::vector<double> w = task.w0;
    std::vector<std::vector<double>> stale;
    ComputeParams compute;
    Rng rng(3, 1);
    run_round(w, stale, task, setup, compute, rng);
    std::vector<double> g1;
    task.local_grad(1, task.w0, g1);
    for (std::size_t i = 0; i < task.dim; ++i)
        CHECK(w[i] == doctest::Approx(task.w0[i] - 0.05 * g1[i]).epsilon(1e-14));
}

TEST_CASE("run_round: all-fail leaves the model untouched, policy sets the cost") {
    auto task = make_task(2, 3, 0.1, std::vector<double>(2, 1.0), 8);
    RoundSetup setup = plain_setup(2, 8.0, 1e-15, 0.1);
    std::vector<double> w = task.w0;
    std::vector<std::vector<double>> stale;
    ComputeParams compute;
    Rng rng(1, 0);
    const auto out = run_round(w, stale, task, setup, compute, rng);
    CHECK(out.participants == 0);
    CHECK(w == task.w0);
    CHECK(out.round_latency_s == doctest::Approx(sensing_time(8.0, compute)));

    setup.all_fail = AllFailPolicy::kSkipRound;
    Rng rng2(1, 0);
    const auto skipped = run_round(w, stale, task, setup, compute, rng2);
    CHECK(skipped.round_latency_s == doctest::Approx(0.0));
}

TEST_CASE("run_round: aggregate expectation matches enumerated alpha") {
    auto task = make_task(3, 4, 0.5, std::vector<double>(3, 0.0), 21);
    RoundSetup setup = plain_setup(3, 8.0, 0.0, 1.0);  // eta = 1: aggregate = w - w'
    setup.q = {0.45, 0.7, 0.9};
    SensingProfile profile{setup.q};
    const auto alpha = enumerate_alpha(profile);

    std::vector<double> expected(task.dim, 0.0), gk;
    for (std::size_t k = 0; k < 3; ++k) {
        task.local_grad(k, task.w0, gk);
        for (std::size_t i = 0; i < task.dim; ++i) expected[i] += alpha[k] * gk[i];
    }

    ComputeParams compute;
    Rng rng(77, 0);
    std::vector<std::vector<double>> stale;
    std::vector<double> mean(task.dim, 0.0), m2(task.dim, 0.0);
    std::size_t kept = 0;
    const std::size_t draws = 100000;
    while (kept < draws) {
        std::vector<double> w = task.w0;
        const auto out = run_round(w, stale, task, setup, compute, rng);
        if (out.participants == 0) continue;
        ++kept;
        for (std::size_t i = 0; i < task.dim; ++i) {
            const double agg = task.w0[i] - w[i];
            const double d = agg - mean[i];
            mean[i] += d / static_cast<double>(kept);
            m2[i] += d * (agg - mean[i]);
        }
    }
    for (std::size_t i = 0; i < task.dim; ++i) {
        const double se = std::sqrt(m2[i] / (static_cast<double>(draws) - 1.0) /
                                    static_cast<double>(draws));
        CHECK(std::abs(mean[i] - expected[i]) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("run_training: noiseless full participation matches closed-form GD") {
    auto task = make_task(2, 3, 0.4, std::vector<double>(2, 0.0), 2, 1.0, 1.0);
    const auto setup = plain_setup(2, 8.0, 1.0, 0.1);
    ComputeParams compute;
    const auto traces = run_training(task, setup, compute, 40, 1, 99);
    // H = I: gap(n) = (1 - eta)^(2n) * gap(0)
    for (const auto& row : traces[0].rows) {
        const double expected =
            task.initial_gap * std::pow(1.0 - 0.1, 2.0 * static_cast<double>(row.round));
        CHECK(row.gap == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("run_training: reproducible, replications differ") {
    auto task = make_task(3, 4, 0.2, std::vector<double>(3, 0.7), 6);
    const auto setup = plain_setup(3, 8.0, 0.8, 0.1);
    ComputeParams compute;
    const auto a = run_training(task, setup, compute, 30, 2, 1234, 1);
    const auto b = run_training(task, setup, compute, 30, 2, 1234, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t n = 0; n < a[r].rows.size(); ++n) {
            CHECK(a[r].rows[n].gap == b[r].rows[n].gap);
            CHECK(a[r].rows[n].participants == b[r].rows[n].participants);
        }
    CHECK(a[0].rows[5].gap != a[1].rows[5].gap);
}

TEST_CASE("run_training: mean gap dominated by the analytic bound") {
    const std::size_t k_uavs = 4;
    auto task = make_task(k_uavs, 6, 0.15, std::vector<double>(k_uavs, 0.8), 31, 1.0, 0.6);
    const double eta = 0.1, q = 0.75, delta = 12.0;
    auto setup = plain_setup(k_uavs, delta, q, eta);

    LearningConstants consts;
    consts.eta = eta;
    consts.smoothness_l = task.smoothness_l;
    consts.strong_convexity_mu = task.strong_convexity_mu;
    consts.sigma2.assign(k_uavs, 0.8 * 0.8);
    consts.lambda2 = task.lambda2;
    consts.initial_gap = task.initial_gap;
    consts.epsilon = 1e-3;

    SensingProfile profile;
    profile.q.assign(k_uavs, q);
    const std::vector<double> delta_vec(k_uavs, delta);
    const double g = g_general(consts, delta_vec, profile);
    const double a = contraction_factor(consts);

    ComputeParams compute;
    const std::size_t rounds = 150, reps = 120;
    const auto traces = run_training(task, setup, compute, rounds, reps, 2025);
    const auto mean = mean_gap_curve(traces);
    for (std::size_t n = 1; n <= rounds; ++n) {
        // generous slack: the bound is far above the empirical mean
        CHECK(mean[n - 1] <= phi(n, a, g, consts.initial_gap));
    }
    // bias floor dominates the plateau
    double tail = 0.0;
    for (std::size_t n = rounds - 15; n < rounds; ++n) tail += mean[n];
    tail /= 15.0;
    CHECK(tail <= g / (1.0 - a));
    CHECK(tail > 0.0);
}

TEST_CASE("run_training: lower q_s slows convergence") {
    const std::size_t k_uavs = 4;
    auto task = make_task(k_uavs, 6, 0.2, std::vector<double>(k_uavs, 0.6), 17, 1.0, 0.7);
    ComputeParams compute;
    const std::size_t rounds = 120, reps = 160;
    auto lo = plain_setup(k_uavs, 12.0, 0.45, 0.1);
    auto hi = plain_setup(k_uavs, 12.0, 0.9, 0.1);
    const auto mean_lo = mean_gap_curve(run_training(task, lo, compute, rounds, reps, 7));
    const auto mean_hi = mean_gap_curve(run_training(task, hi, compute, rounds, reps, 7));
    // coupled seeds: the low-q curve should sit above the high-q curve
    for (std::size_t n = 0; n < rounds; ++n)
        CHECK(mean_lo[n] >= mean_hi[n] * 0.98);
}

TEST_CASE("planned deployment meets its gap target in simulation") {
    // end to end: plan a scene, train on the planned deployment, and check
    // that the mean optimality gap after N* rounds is below epsilon
    Scene scene;
    scene.uav_altitude_m = 150.0;
    scene.theta0_deg = 70.0;
    scene.radio.tx_power_w = {0.1};
    for (std::size_t k = 0; k < 3; ++k) {
        const double ang = 2.0 * kPi * static_cast<double>(k) / 3.0;
        scene.targets.push_back(
            Position{(120.0 + 15.0 * k) * std::cos(ang), (120.0 + 15.0 * k) * std::sin(ang), 0.0});
    }
    LearningConstants consts;
    consts.eta = 0.1;
    consts.smoothness_l = 1.0;
    consts.strong_convexity_mu = 0.5;
    consts.sigma2.assign(3, 0.5);
    consts.lambda2.assign(3, 0.001);
    consts.initial_gap = 1.0;
    consts.epsilon = 0.05;
    ComputeParams compute;
    SolverSettings settings;
    settings.n_sweep = NSweepMode::kGeometric;
    settings.n_max = 1500;

    const auto plan = run_bbpo(scene, consts, compute, settings);
    REQUIRE(audit_plan(plan, scene, consts, compute, settings).feasible);

    const auto task = make_task(3, 6, std::sqrt(0.001),
                                std::vector<double>(3, std::sqrt(0.5)), 5,
                                consts.smoothness_l, consts.strong_convexity_mu,
                                consts.initial_gap);
    const auto setup =
        round_setup_from_plan(plan, scene, consts.eta, AllFailPolicy::kCountRound);
    const std::size_t reps = 40;
    const auto traces = run_training(task, setup, compute, plan.n_rounds, reps, 99);

    double mean = 0.0, m2 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const double gap = traces[r].rows.back().gap;
        const double d = gap - mean;
        mean += d / static_cast<double>(r + 1);
        m2 += d * (gap - mean);
    }
    const double se = std::sqrt(m2 / (static_cast<double>(reps) - 1.0) /
                                static_cast<double>(reps));
    CHECK(mean <= consts.epsilon + 3.0 * se);
}

TEST_CASE("estimate_constants recovers analytic values") {
    SUBCASE("noise-free task estimates zero sigma") {
        const auto task = make_task(2, 4, 0.0, std::vector<double>(2, 0.0), 3);
        const auto est = estimate_constants(task, task.w0, 16.0, 200);
        for (double s : est.sigma2) CHECK(s == doctest::Approx(0.0));
        for (double l : est.lambda2) CHECK(l == doctest::Approx(0.0));
    }
    SUBCASE("identity Hessian gives L = mu = 1") {
        const auto task = make_task(2, 4, 0.1, std::vector<double>(2, 0.5), 3, 1.0, 1.0);
        const auto est = estimate_constants(task, task.w0, 8.0, 200);
        CHECK(est.smoothness_l == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(est.strong_convexity_mu == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("sigma and lambda within 5 percent at 1e4 draws") {
        const auto task = make_task(3, 5, 0.4, {0.5, 1.0, 1.5}, 13);
        const auto est = estimate_constants(task, task.w0, 16.0, 10000);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(est.sigma2[k] ==
                  doctest::Approx(task.sigma[k] * task.sigma[k]).epsilon(0.05));
            CHECK(est.lambda2[k] == doctest::Approx(task.lambda2[k]).epsilon(0.05));
        }
    }
}

TEST_SUITE_END();
