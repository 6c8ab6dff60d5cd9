//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/clock.hpp"
#include "tsnsim/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace tsnsim;

namespace {

ClockConfig cfg(double drift_ppm, CounterMode mode = CounterMode::DualCounter)
{
    ClockConfig c;
    c.drift_ppm = drift_ppm;
    c.mode = mode;
    return c;
}

} // namespace

TEST_CASE("zero drift counts exact nanoseconds")
{
    OscillatorClock c(cfg(0));
    CHECK(c.local_time(SimTime::from_s(1)) == 1'000'000'000);
}

TEST_CASE("drift scales the local counter")
{
    OscillatorClock fast(cfg(10));
    const Nanoseconds t = fast.local_time(SimTime::from_ms(125));
    CHECK(std::llabs(t - 125'001'250) <= 5);

    OscillatorClock slow(cfg(-5));
    const Nanoseconds u = slow.local_time(SimTime::from_s(1));
    CHECK(std::llabs(u - 999'995'000) <= 5);
}

TEST_CASE("timestamps are quantized to the tick")
{
    OscillatorClock c(cfg(3.7));
    RngStream jitter(9, "q");
    for (std::uint64_t ps : {1ull, 1234567ull, 999999999ull, 77777777777ull}) {
        CHECK(c.local_time(SimTime{ps}) % 5 == 0);
        CHECK(c.capture_timestamp(SimTime{ps}, &jitter) % 5 == 0);
    }
}

TEST_CASE("offset application follows the sign convention")
{
    OscillatorClock c(cfg(0));
    const SimTime t1 = SimTime::from_ms(1);
    const Nanoseconds before = c.global_time(t1);
    c.apply_offset(t1, 20);
    CHECK(c.global_time(t1) == before - 20);
    CHECK(c.accumulated_offset_ns() == -20);
    c.apply_offset(t1, -5);
    CHECK(c.accumulated_offset_ns() == -15);
    CHECK(c.local_time(t1) == before); // dual counter: local untouched
}

TEST_CASE("single counter mode shifts generated timestamps")
{
    OscillatorClock c(cfg(0, CounterMode::SingleCounter));
    const SimTime t = SimTime::from_ms(2);
    const Nanoseconds before = c.capture_timestamp(t, nullptr);
    c.apply_offset(t, -100); // slave behind: global moves +100
    CHECK(c.capture_timestamp(t, nullptr) == before + 100);
    CHECK(c.global_time(t) == c.local_time(t));
    CHECK(c.jump_epoch() == 1);
}

TEST_CASE("dual counter isolation: local replay identical under offsets")
{
    OscillatorClock a(cfg(7.5));
    OscillatorClock b(cfg(7.5));
    RngStream rng(3, "offsets");
    for (int i = 1; i <= 200; ++i) {
        const SimTime t = SimTime::from_us(static_cast<std::uint64_t>(i) * 37);
        a.apply_offset(t, rng.uniform_i64(-1000, 1000));
        CHECK(a.local_time(t) == b.local_time(t));
    }
}

TEST_CASE("rate compensation advances global at the set slope")
{
    OscillatorClock c(cfg(0));
    c.set_rate_compensation(SimTime{0}, 1.0 + 100e-6);
    const Nanoseconds g = c.global_time(SimTime::from_s(1));
    CHECK(std::llabs(g - 1'000'100'000) <= 5);
}

TEST_CASE("drift bound between unsynchronized clocks")
{
    RngStream rng(11, "pair");
    for (int i = 0; i < 50; ++i) {
        const double d1 = rng.uniform(-10, 10);
        const double d2 = rng.uniform(-10, 10);
        OscillatorClock c1(cfg(d1));
        OscillatorClock c2(cfg(d2));
        const SimTime t = SimTime::from_ms(rng.uniform_i64(1, 5000));
        const double bound =
            std::abs(d1 - d2) * 1e-6 * static_cast<double>(t.ps) * 1e-3 + 10.0; // ns
        const double gap =
            std::abs(static_cast<double>(c1.global_time(t) - c2.global_time(t)));
        CHECK(gap <= bound + 0.5);
    }
}

TEST_CASE("piecewise drift changes keep local time continuous and monotone")
{
    OscillatorClock c(cfg(2.0));
    Nanoseconds prev = 0;
    RngStream rng(5, "walk");
    for (int i = 1; i <= 100; ++i) {
        const SimTime t = SimTime::from_ms(static_cast<std::uint64_t>(i));
        const Nanoseconds now = c.local_time(t);
        CHECK(now >= prev);
        CHECK(now - prev <= 1'000'200); // 1 ms +- drift and a tick
        prev = now;
        c.set_drift_ppm(t, rng.uniform(-10, 10));
    }
}

TEST_CASE("rate ratio estimator follows the spec examples")
{
    RateRatioEstimator est;
    CHECK(est.current_ratio() == 1.0);
    est.update(0, 0);
    CHECK(est.current_ratio() == 1.0); // still priming
    est.update(125'000'000, 125'000'000);
    CHECK(est.current_ratio() == doctest::Approx(1.0));

    RateRatioEstimator est2;
    est2.update(0, 1'000);
    est2.update(125'000'000, 125'001'250);
    CHECK(est2.current_ratio() == doctest::Approx(125'000'000.0 / 125'000'250.0));

    const double before = est2.current_ratio();
    est2.update(250'000'000, 125'001'250); // recv did not advance
    CHECK(est2.current_ratio() == before);
    CHECK(est2.rejected() == 1);
}

TEST_CASE("rate ratio converges within two updates under constant drift")
{
    RngStream rng(17, "conv");
    for (int i = 0; i < 30; ++i) {
        const double dm = rng.uniform(-5, 5);
        const double ds = rng.uniform(-10, 10);
        const double truth = (1 + dm * 1e-6) / (1 + ds * 1e-6);
        RateRatioEstimator est;
        for (int k = 0; k < 3; ++k) {
            const double tau = 1e9 * (k + 1);
            est.update(static_cast<Nanoseconds>(tau * (1 + dm * 1e-6)),
                       static_cast<Nanoseconds>(tau * (1 + ds * 1e-6)));
        }
        CHECK(std::abs(est.current_ratio() - truth) < 2e-8);
    }
}
