#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"
#include "ising/schedules.hpp"

using namespace ising;

TEST_CASE("constant schedule returns its value everywhere") {
    auto s = ScheduleSpec::constant(0.2);
    s.total_steps = 100;
    for (int t : {0, 1, 50, 100}) CHECK(eval_schedule(s, t) == 0.2);
}

TEST_CASE("tanh ramp hits a0*tanh(a1) at the end") {
    auto s = ScheduleSpec::tanh_ramp(0.7, 1.0, 1000);
    CHECK(eval_schedule(s, 0) == 0.0);
    CHECK(eval_schedule(s, 1000) == doctest::Approx(0.7 * std::tanh(1.0)).epsilon(1e-12));
    CHECK(eval_schedule(s, 1000) == doctest::Approx(0.5331).epsilon(1e-3));
}

TEST_CASE("tanh ramp is monotone non-decreasing and bounded by a0") {
    auto s = ScheduleSpec::tanh_ramp(0.6, 2.5, 200);
    double prev = -1.0;
    for (int t = 0; t <= 200; ++t) {
        double v = eval_schedule(s, t);
        CHECK(v >= prev);
        CHECK(v <= 0.6);
        prev = v;
    }
}

TEST_CASE("geometric decay") {
    auto s = ScheduleSpec::geometric(10.0, 0.8, 50);
    CHECK(eval_schedule(s, 0) == 10.0);
    CHECK(eval_schedule(s, 1) == doctest::Approx(8.0).epsilon(1e-12));
    double prev = 11.0;
    for (int t = 0; t <= 50; ++t) {
        double v = eval_schedule(s, t);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("linear through the origin") {
    auto s = ScheduleSpec::linear(1.0, 64);
    CHECK(eval_schedule(s, 0) == 0.0);
    CHECK(eval_schedule(s, 32) == doctest::Approx(0.5));
    CHECK(eval_schedule(s, 64) == 1.0);
}

TEST_CASE("inverse-linear annealing reaches beta_f") {
    auto s = ScheduleSpec::inverse_linear_beta(3.0, 10);
    CHECK(eval_schedule(s, 0) == 0.0);
    CHECK(eval_schedule(s, 10) == 3.0);
}

TEST_CASE("periodic square wave has the exact period and starts high") {
    auto s = ScheduleSpec::periodic_square(1.0, 0.0, 10.0, 100);
    for (int t = 0; t <= 100; ++t) {
        const double expected = (t % 10) < 5 ? 1.0 : 0.0;
        CHECK(eval_schedule(s, t) == expected);
    }
}

TEST_CASE("out-of-range step index throws") {
    auto s = ScheduleSpec::constant(1.0);
    s.total_steps = 5;
    CHECK_THROWS_AS(eval_schedule(s, -1), std::domain_error);
    CHECK_THROWS_AS(eval_schedule(s, 6), std::domain_error);
}
