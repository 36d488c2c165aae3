#include <doctest.h>

#include <stdexcept>

#include "skyfeel/latency.hpp"
#include "skyfeel/rng.hpp"

using namespace skyfeel;

TEST_SUITE_BEGIN("latency");

TEST_CASE("sensing time") {
    ComputeParams p;  // T0 = 0.5 s
    CHECK(sensing_time(64.0, p) == doctest::Approx(32.0));
    CHECK(sensing_time(1.0, p) == doctest::Approx(0.5));
    CHECK_THROWS_AS(sensing_time(0.0, p), std::domain_error);
}

TEST_CASE("compute time") {
    ComputeParams p;  // xi = 2.5e7, f_cpu = 5e8
    CHECK(compute_time(64.0, true, p) == doctest::Approx(3.2));
    CHECK(compute_time(64.0, false, p) == doctest::Approx(0.0));
    CHECK(compute_time(128.0, true, p) == doctest::Approx(2.0 * compute_time(64.0, true, p)));
}

TEST_CASE("upload time") {
    ComputeParams p;  // D0 = 156,821,664 bits
    CHECK(upload_time(4.6e6, true, p) == doctest::Approx(34.09).epsilon(1e-3));
    CHECK(upload_time(4.6e6, false, p) == doctest::Approx(0.0));
    CHECK(upload_time(1.0e15, true, p) < 1e-6);
    CHECK_THROWS_AS(upload_time(0.0, true, p), std::domain_error);
}

TEST_CASE("expected round latency") {
    ComputeParams p;
    const double full = expected_round_latency(64.0, 1.0, 4.6e6, p);
    CHECK(full == doctest::Approx(32.0 + 3.2 + p.payload_bits / 4.6e6).epsilon(1e-12));
    CHECK(expected_round_latency(64.0, 0.9965, 4.6e6, p) == doctest::Approx(69.2).epsilon(5e-3));
    // q -> 0 limit tends to the sensing time alone
    CHECK(expected_round_latency(64.0, 1e-9, 4.6e6, p) == doctest::Approx(32.0).epsilon(1e-6));
    CHECK_THROWS_AS(expected_round_latency(64.0, 0.0, 4.6e6, p), std::domain_error);
}

TEST_CASE("expected latency monotonicity") {
    ComputeParams p;
    CHECK(expected_round_latency(65.0, 0.9, 4.6e6, p) >
          expected_round_latency(64.0, 0.9, 4.6e6, p));
    CHECK(expected_round_latency(64.0, 0.9, 5.0e6, p) <
          expected_round_latency(64.0, 0.9, 4.6e6, p));
    CHECK(expected_round_latency(64.0, 0.95, 4.6e6, p) >
          expected_round_latency(64.0, 0.9, 4.6e6, p));
}

TEST_CASE("round latency is the max over UAVs") {
    UavTiming a{10.0, 0.0, 0.0, true};
    UavTiming b{12.0, 3.0, 5.0, true};
    CHECK(round_latency({a}) == doctest::Approx(10.0));
    CHECK(round_latency({a, b}) == doctest::Approx(20.0));
    UavTiming c = b;  // equalized sums pin the common value
    CHECK(round_latency({b, c}) == doctest::Approx(20.0));
    CHECK_THROWS_AS(round_latency({}), std::invalid_argument);
}

TEST_CASE("realized latency converges to the expectation") {
    ComputeParams p;
    const double delta = 16.0, q = 0.7, rate = 2.0e6;
    const double expected = expected_round_latency(delta, q, rate, p);
    Rng rng(7, 1);
    double acc = 0.0;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
        const bool on = rng.bernoulli(q);
        acc += sensing_time(delta, p) + compute_time(delta, on, p) +
               upload_time(rate, on, p);
    }
    CHECK(acc / draws == doctest::Approx(expected).epsilon(0.01));
}

TEST_SUITE_END();
