#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmstab/metrics.hpp"

using namespace swarmstab;
using Vec = Eigen::VectorXd;

namespace {

Vec sample(double t_end, double dt, const std::function<double(double)>& f) {
    const auto n = static_cast<Eigen::Index>(std::llround(t_end / dt)) + 1;
    Vec y(n);
    for (Eigen::Index k = 0; k < n; ++k) y(k) = f(static_cast<double>(k) * dt);
    return y;
}

}  // namespace

TEST_CASE("settling time of a constant is zero") {
    CHECK(settling_time(Vec::Constant(100, 0.7), 0.01, 0.7) == 0.0);
    CHECK(settling_time(Vec::Zero(10), 0.01, 0.0) == 0.0);
}

TEST_CASE("settling time of a decaying exponential is ln 50") {
    const double dt = 1e-3;
    const Vec y = sample(10.0, dt, [](double t) { return std::exp(-t); });
    CHECK(std::abs(settling_time(y, dt, 0.0) - std::log(50.0)) <= dt);
}

TEST_CASE("a channel that never settles reports the horizon") {
    const double dt = 0.01;
    const Vec y = sample(5.0, dt, [](double t) { return std::sin(3.0 * t); });
    CHECK(settling_time(y, dt, 0.0) == doctest::Approx(5.0));
}

TEST_CASE("settling time argument checks") {
    CHECK_THROWS_AS(settling_time(Vec(0), 0.01, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(settling_time(Vec::Ones(3), 0.01, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(peak_overshoot(Vec(0), 0.01, 1.0), std::invalid_argument);
}

TEST_CASE("settling time of a second-order step agrees with a fine-grid scan") {
    for (double zeta : {0.2, 0.5, 0.7}) {
        const double wn = 2.0;
        const double dt = 1e-3;
        auto f = [&](double t) { return oracle::second_order_step(zeta, wn, t); };
        const Vec y = sample(20.0, dt, f);
        // scale = max(|final|, max |y - final|) = 1 for an underdamped unit step from 0
        const double expected = oracle::settling_bruteforce(f, 1.0, 0.02, 20.0);
        CHECK(settling_time(y, dt, 1.0) == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("peak overshoot of a second-order step") {
    const double dt = 1e-3;
    const Vec y = sample(20.0, dt, [](double t) { return oracle::second_order_step(0.5, 1.0, t); });
    const auto os = peak_overshoot(y, dt, 1.0);
    CHECK(os.value == doctest::Approx(0.163).epsilon(0.005 / 0.163));
    CHECK_FALSE(os.absolute);
    for (double zeta : {0.1, 0.3, 0.6, 0.8}) {
        const Vec z = sample(40.0, dt, [&](double t) { return oracle::second_order_step(zeta, 1.0, t); });
        CHECK(peak_overshoot(z, dt, 1.0).value == doctest::Approx(oracle::second_order_overshoot(zeta)).epsilon(0.01));
        CHECK(peak_overshoot(z, dt, 1.0).peak_time ==
              doctest::Approx(std::numbers::pi / std::sqrt(1 - zeta * zeta)).epsilon(0.01));
    }
}

TEST_CASE("monotone and constant responses do not overshoot") {
    const double dt = 1e-3;
    const Vec y = sample(10.0, dt, [](double t) { return 1.0 - std::exp(-t); });
    CHECK(peak_overshoot(y, dt, 1.0).value == 0.0);
    const Vec down = sample(10.0, dt, [](double t) { return -1.0 + std::exp(-t); });
    CHECK(peak_overshoot(down, dt, -1.0).value == 0.0);
    CHECK(peak_overshoot(Vec::Constant(10, 0.5), dt, 0.5).value == 0.0);
}

TEST_CASE("zero-step overshoot is the absolute excursion") {
    const double dt = 0.01;
    const Vec y = sample(5.0, dt, [](double t) { return -0.3 * t * std::exp(-t); });
    const auto os = peak_overshoot(y, dt, 0.0);
    CHECK(os.absolute);
    CHECK(os.value == doctest::Approx(0.3 / std::exp(1.0)).epsilon(1e-4));
    CHECK(os.peak_time == doctest::Approx(1.0));
}

TEST_CASE("time-weighted absolute integral") {
    const double dt = 1e-3;
    const Vec y = sample(40.0, dt, [](double t) { return std::exp(-t); });
    // integral of t e^-t over [0, inf) is 1
    CHECK(time_weighted_abs_integral(y, dt) == doctest::Approx(1.0).epsilon(1e-3));
    auto g = [](double t) { return t * std::abs(std::sin(t)); };
    const Vec s = sample(3.0, 0.01, [](double t) { return std::sin(t); });
    CHECK(time_weighted_abs_integral(s, 0.01) == doctest::Approx(oracle::trapezoid(g, 3.0, 300)).epsilon(1e-12));
    CHECK(time_weighted_abs_integral(Vec::Zero(50), 0.1) == 0.0);
    CHECK(time_weighted_abs_integral(Vec::Ones(1), 0.1) == 0.0);
}

TEST_CASE("response metrics bundle the three measures") {
    const double dt = 1e-3;
    const Vec y = sample(20.0, dt, [](double t) { return oracle::second_order_step(0.5, 1.0, t); });
    const auto m = response_metrics(y, dt, 1.0, 1.0);
    CHECK(m.settling_time == settling_time(y, dt, 1.0));
    CHECK(m.peak_overshoot == peak_overshoot(y, dt, 1.0).value);
    CHECK(m.itae_contribution == time_weighted_abs_integral(y, dt));
}
