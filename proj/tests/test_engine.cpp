//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/engine.hpp"
#include "tsnsim/rng.hpp"

#include <doctest.h>

#include <vector>

using namespace tsnsim;

TEST_CASE("event at current time is accepted and fires first")
{
    Engine eng;
    std::vector<int> order;
    eng.at(SimTime{0}, [&] { order.push_back(1); });
    eng.at(SimTime::from_ns(5), [&] { order.push_back(2); });
    eng.run_until(SimTime::from_ns(10));
    CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("equal fire times dequeue in insertion order")
{
    Engine eng;
    std::vector<int> order;
    for (int i = 0; i < 8; ++i)
        eng.at(SimTime::from_ns(100), [&order, i] { order.push_back(i); });
    eng.run_until(SimTime::from_us(1));
    for (int i = 0; i < 8; ++i)
        CHECK(order[i] == i);
}

TEST_CASE("scheduling into the past is a fatal logic error")
{
    Engine eng;
    eng.run_until(SimTime::from_ns(10));
    CHECK_THROWS_AS(eng.at(SimTime::from_ns(5), [] {}), SimulationError);
}

TEST_CASE("run_until on an empty queue advances time and returns zero")
{
    Engine eng;
    CHECK(eng.run_until(SimTime::from_s(1)) == 0);
    CHECK(eng.now() == SimTime::from_s(1));
}

TEST_CASE("events beyond the horizon stay queued")
{
    Engine eng;
    int fired = 0;
    for (std::uint64_t t : {10ull, 20ull, 30ull, 50ull})
        eng.at(SimTime::from_ns(t), [&] { ++fired; });
    CHECK(eng.run_until(SimTime::from_ns(40)) == 3);
    CHECK(fired == 3);
    CHECK(eng.run_until(SimTime::from_ns(60)) == 1);
    CHECK(fired == 4);
}

TEST_CASE("cancelled events do not run")
{
    Engine eng;
    int fired = 0;
    auto h = eng.at(SimTime::from_ns(10), [&] { ++fired; });
    eng.at(SimTime::from_ns(20), [&] { ++fired; });
    h.cancel();
    eng.run_until(SimTime::from_us(1));
    CHECK(fired == 1);
}

TEST_CASE("processed fire times are non-decreasing and the trace is reproducible")
{
    auto run_once = [] {
        Engine eng;
        RngStream rng(7, "engine-prop");
        SimTime last{0};
        bool monotone = true;
        // self-rescheduling chain with random fan-out
        std::function<void(int)> spawn = [&](int depth) {
            if (eng.now() < last)
                monotone = false;
            last = eng.now();
            if (depth > 12)
                return;
            const int fan = static_cast<int>(rng.uniform_i64(1, 2));
            for (int i = 0; i < fan; ++i)
                eng.after(rng.uniform_i64(0, 1000) * 1000ull, [&spawn, depth] { spawn(depth + 1); });
        };
        eng.at(SimTime{0}, [&] { spawn(0); });
        eng.run_until(SimTime::from_ms(10));
        CHECK(monotone);
        return eng.trace_hash();
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("rng streams are independent and reproducible")
{
    RngStream a1(42, "alpha"), a2(42, "alpha"), b(42, "beta");
    bool diverged = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a1.next_u64();
        CHECK(x == a2.next_u64());
        if (x != b.next_u64())
            diverged = true;
    }
    CHECK(diverged);
    RngStream u(1, "uniform");
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform01();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}
