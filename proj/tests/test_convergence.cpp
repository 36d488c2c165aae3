#include <doctest.h>

#include <cmath>

#include "skyfeel/convergence.hpp"

using namespace skyfeel;

namespace {

LearningConstants constants(std::size_t k, double eta = 0.1, double l = 1.0,
                            double mu = 0.5) {
    LearningConstants c;
    c.eta = eta;
    c.smoothness_l = l;
    c.strong_convexity_mu = mu;
    c.sigma2.assign(k, 1.0);
    c.lambda2.assign(k, 0.01);
    c.initial_gap = 1.0;
    c.epsilon = 0.05;
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("convergence");

TEST_CASE("contraction factor") {
    LearningConstants c = constants(1, 0.125, 1.0, 1.0);  // eta = 1/(8L), mu = L
    CHECK(contraction_factor(c) == doctest::Approx(0.9375).epsilon(1e-15));

    c.eta = 1e-9;
    CHECK(contraction_factor(c) == doctest::Approx(1.0).epsilon(1e-8));

    c.eta = 0.25;  // boundary 1/(4L) rejected
    CHECK_THROWS_AS(contraction_factor(c), InfeasibleBound);
}

TEST_CASE("uniform G bound structure") {
    LearningConstants c = constants(4);

    SUBCASE("heterogeneity-free collapse") {
        c.lambda2.assign(4, 0.0);
        const std::vector<double> delta(4, 16.0);
        const double g = g_uniform_bound(c, delta, 1.0, 1.0);
        double sum_noise = 0.0;
        for (std::size_t i = 0; i < 4; ++i) sum_noise += c.sigma2[i] / delta[i];
        const double expected = c.eta / 4.0 * sum_noise +
                                2.0 * c.smoothness_l * c.eta * c.eta / 16.0 * sum_noise;
        CHECK(g == doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("doubling delta reduces only the sigma terms") {
        const std::vector<double> d1(4, 16.0), d2(4, 32.0);
        const double g1 = g_uniform_bound(c, d1, 0.9, 0.9);
        const double g2 = g_uniform_bound(c, d2, 0.9, 0.9);
        CHECK(g2 < g1);
        c.sigma2.assign(4, 0.0);
        CHECK(g_uniform_bound(c, d1, 0.9, 0.9) ==
              doctest::Approx(g_uniform_bound(c, d2, 0.9, 0.9)).epsilon(1e-14));
    }

    SUBCASE("third-term ratio at K = 8 between q = 0.5 and q = 1") {
        LearningConstants c8 = constants(8);
        c8.sigma2.assign(8, 0.0);
        c8.lambda2.assign(8, 1.0);
        const std::vector<double> delta(8, 1.0);
        auto third_term = [&](double q) {
            // strip the first and second terms analytically
            const double k = 8.0, eta = c8.eta, l = c8.smoothness_l;
            const double chi = 1.0 - std::pow(1.0 - q, k);
            const double g = g_uniform_bound(c8, delta, q, q);
            const double first = eta / k * 8.0;
            const double second = 2.0 * l * eta * eta / (k * k * chi * q) * 16.0;
            return g - first - second;
        };
        CHECK(third_term(0.5) / third_term(1.0) == doctest::Approx(64.0).epsilon(1e-10));
    }
}

TEST_CASE("general G with enumerated weights") {
    SUBCASE("uniform profiles never exceed the closed-form bound") {
        for (std::size_t k = 2; k <= 8; ++k)
            for (double q = 0.5; q <= 1.0 + 1e-12; q += 0.1)
                for (double d : {1.0, 16.0, 64.0}) {
                    LearningConstants c = constants(k);
                    const std::vector<double> delta(k, d);
                    SensingProfile profile;
                    profile.q.assign(k, std::min(q, 1.0));
                    const double exact = g_general(c, delta, profile);
                    const double bound =
                        g_uniform_bound(c, delta, std::min(q, 1.0), std::min(q, 1.0));
                    CHECK(exact <= bound * (1.0 + 1e-12));
                }
    }

    SUBCASE("lambda = 0 kills the cross term") {
        LearningConstants c = constants(2);
        c.lambda2.assign(2, 0.0);
        const std::vector<double> delta(2, 8.0);
        SensingProfile profile{{0.5, 1.0}};
        const auto alpha = enumerate_alpha(profile);
        const auto beta = enumerate_beta(profile);
        double expected = 0.0;
        double sum_alpha2 = 0.0, sum_noise = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            sum_alpha2 += alpha[i] * alpha[i];
            sum_noise += c.sigma2[i] / delta[i];
            expected += c.smoothness_l * c.eta * c.eta * beta[i] * c.sigma2[i] / delta[i];
        }
        expected += c.eta * sum_alpha2 * sum_noise;
        CHECK(g_general(c, delta, profile) == doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("spread factors for q = [0.5, 1.0]") {
        // qbar = 0.75: each spread factor is 0.0625 + 0.5625
        LearningConstants c = constants(2);
        c.sigma2.assign(2, 0.0);
        c.lambda2 = {1.0, 0.0};
        const std::vector<double> delta(2, 8.0);
        SensingProfile profile{{0.5, 1.0}};
        const auto beta = enumerate_beta(profile);
        const double gamma = 2.0 / (2.0 * 0.5 * 0.5);  // q_min = 0.5, K = 2
        const double expected =
            2.0 * c.smoothness_l * c.eta * c.eta * gamma * (0.0625 + 0.5625) * 1.0 +
            c.smoothness_l * c.eta * c.eta * beta[0] * 2.0 * 1.0 +
            c.eta * 0.625 * 1.0;  // sum alpha^2 = 0.0625 + 0.5625
        CHECK(g_general(c, delta, profile) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("phi bound") {
    CHECK(phi(0, 0.9, 0.01, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    // matches the unrolled recursion gap(n+1) = A gap(n) + G
    double unrolled = 1.0;
    for (std::size_t n = 1; n <= 40; ++n) {
        unrolled = 0.9375 * unrolled + 0.01;
        CHECK(phi(n, 0.9375, 0.01, 1.0) == doctest::Approx(unrolled).epsilon(1e-12));
    }

    // limit is the bias floor G / (1 - A)
    CHECK(phi(100000, 0.9375, 0.01, 1.0) == doctest::Approx(0.01 / 0.0625).epsilon(1e-12));

    // monotone towards the floor from either side
    CHECK(phi(10, 0.9, 0.001, 1.0) > phi(20, 0.9, 0.001, 1.0));   // above floor: decreasing
    CHECK(phi(10, 0.9, 0.2, 0.1) < phi(20, 0.9, 0.2, 0.1));       // below floor: increasing
}

TEST_CASE("phi is monotone in delta and q through G") {
    LearningConstants c = constants(4);
    const double a = contraction_factor(c);
    const std::vector<double> d_small(4, 8.0), d_large(4, 32.0);
    const double g_small = g_uniform_bound(c, d_small, 0.9, 0.9);
    const double g_large = g_uniform_bound(c, d_large, 0.9, 0.9);
    for (std::size_t n : {1u, 5u, 50u, 500u})
        CHECK(phi(n, a, g_large, c.initial_gap) <= phi(n, a, g_small, c.initial_gap));

    const double g_low_q = g_uniform_bound(c, d_small, 0.6, 0.6);
    for (std::size_t n : {1u, 5u, 50u, 500u})
        CHECK(phi(n, a, g_small, c.initial_gap) <= phi(n, a, g_low_q, c.initial_gap));
}

TEST_CASE("bound state packaging") {
    LearningConstants c = constants(2);
    const auto state = bound_state(c, 0.003);
    CHECK(state.contraction_a == doctest::Approx(0.97));
    CHECK(state.noise_g == doctest::Approx(0.003));
    CHECK(state.bias_floor == doctest::Approx(0.1));  // 0.003 / 0.03
    CHECK(state.contraction_a > 0.0);
    CHECK(state.contraction_a < 1.0);
    CHECK_THROWS_AS(bound_state(c, -1.0), std::domain_error);
}

TEST_CASE("minimum rounds") {
    // epsilon >= lambda: nothing to do
    CHECK(min_rounds(1.0, 0.9, 1.0, 0.001) == 0);
    CHECK(min_rounds(2.0, 0.9, 1.0, 0.001) == 0);

    // hand value: ceil(log_0.9(0.004 / 0.099)) = 31
    const std::size_t n = min_rounds(0.05, 0.9, 1.0, 0.001);
    CHECK(n == 31);
    CHECK(phi(n, 0.9, 0.001, 1.0) <= 0.05);
    CHECK(phi(n - 1, 0.9, 0.001, 1.0) > 0.05);

    // epsilon at or below the bias floor
    CHECK_THROWS_AS(min_rounds(0.0099, 0.9, 1.0, 0.001), InfeasibleBound);
    // initial gap below the floor
    CHECK_THROWS_AS(min_rounds(0.05, 0.9, 0.005, 0.001), InfeasibleBound);
}

TEST_CASE("validation") {
    LearningConstants c = constants(2);
    c.eta = 0.3;  // >= 1/(4L)
    CHECK_THROWS(c.validate(2));
    c = constants(2);
    c.sigma2 = {1.0};
    CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
}

TEST_SUITE_END();
