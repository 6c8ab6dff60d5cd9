//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/channel.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace tsnsim;

namespace {

/// Records deliveries, tx starts, and MAC signals for channel tests.
struct Recorder final : LinkHooks {
    struct Delivery {
        SimTime at;
        Frame frame;
    };
    Engine* eng = nullptr;
    std::vector<Delivery> delivered;
    std::vector<SimTime> tx_starts;
    std::vector<SimTime> acks;
    int final_nacks = 0;
    int attempts = 0;

    void on_tx_start(Frame& f, int, int) override
    {
        tx_starts.push_back(eng->now());
        ++attempts;
        f.delivered_egress_ts = static_cast<Nanoseconds>(eng->now().ps / 1000);
    }
    void on_frame(const Frame& f, int) override { delivered.push_back({eng->now(), f}); }
    void on_mac_ack(const Frame&, int) override { acks.push_back(eng->now()); }
    void on_mac_final_nack(const Frame&, int) override { ++final_nacks; }
};

Frame ptp_frame(std::size_t bytes = 128)
{
    Frame f;
    f.is_ptp = true;
    f.size_bytes = bytes;
    return f;
}

} // namespace

TEST_CASE("wired latency is queue + serialization + propagation")
{
    Engine eng;
    WiredLinkConfig cfg;
    cfg.bandwidth_bps = 1'000'000'000;
    cfg.propagation_ps = 50'000;
    WiredLink link(eng, cfg);
    Recorder a, b;
    a.eng = b.eng = &eng;
    link.attach(0, &a, 0);
    link.attach(1, &b, 0);

    Frame f = ptp_frame(1500);
    link.transmit(f, 0);
    eng.run_until(SimTime::from_us(20));
    REQUIRE(b.delivered.size() == 1);
    CHECK(b.delivered[0].at.ps == 12'000'000ull + 50'000ull); // 12 us + 50 ns
}

TEST_CASE("back-to-back frames differ by exactly one serialization time")
{
    Engine eng;
    WiredLinkConfig cfg;
    WiredLink link(eng, cfg);
    Recorder a, b;
    a.eng = b.eng = &eng;
    link.attach(0, &a, 0);
    link.attach(1, &b, 0);

    link.transmit(ptp_frame(1500), 0);
    link.transmit(ptp_frame(1500), 0);
    eng.run_until(SimTime::from_us(40));
    REQUIRE(b.delivered.size() == 2);
    CHECK(b.delivered[1].at.ps - b.delivered[0].at.ps == 12'000'000ull);
}

TEST_CASE("sustained overload fills the queue and drops frames")
{
    Engine eng;
    WiredLinkConfig cfg;
    cfg.queue_capacity_bytes = 15'000; // ten full frames
    WiredLink link(eng, cfg);
    Recorder a, b;
    a.eng = b.eng = &eng;
    link.attach(0, &a, 0);
    link.attach(1, &b, 0);

    for (int i = 0; i < 100; ++i)
        link.transmit(ptp_frame(1500), 0);
    eng.run_until(SimTime::from_ms(5));
    CHECK(link.dropped() > 0);
    CHECK(b.delivered.size() + link.dropped() == 100);
}

TEST_CASE("wireless: lossless link delivers on the first attempt")
{
    Engine eng;
    WirelessLinkConfig cfg;
    cfg.target_bler = 0.0;
    WirelessLink link(eng, cfg, RngStream(1, "w0"));
    FixedTrajectory gnb({0, 0, 25});
    FixedTrajectory ue({299.792458, 0, 25}); // exactly 1 us of flight
    link.set_geometry(&gnb, &ue);
    Recorder a, b;
    a.eng = b.eng = &eng;
    link.attach(0, &a, 0);
    link.attach(1, &b, 0);

    link.transmit(ptp_frame(), 0);
    eng.run_until(SimTime::from_ms(1));
    REQUIRE(b.delivered.size() == 1);
    CHECK(b.delivered[0].at.ps == 200'000'000ull + 1'000'000ull); // base + flight
    REQUIRE(a.acks.size() == 1);
    CHECK(a.acks[0].ps == 500'000'000ull); // one HARQ round trip
}

TEST_CASE("wireless: certain loss exhausts retransmissions")
{
    Engine eng;
    WirelessLinkConfig cfg;
    cfg.target_bler = 1.0;
    cfg.harq_max_retx = 4;
    WirelessLink link(eng, cfg, RngStream(2, "w1"));
    Recorder a, b;
    a.eng = b.eng = &eng;
    link.attach(0, &a, 0);
    link.attach(1, &b, 0);

    link.transmit(ptp_frame(), 0);
    eng.run_until(SimTime::from_ms(10));
    CHECK(b.delivered.empty());
    CHECK(a.attempts == 5); // initial + 4 retransmissions
    CHECK(a.final_nacks == 1);
    CHECK(link.frames_lost() == 1);
}

TEST_CASE("wireless: seeded attempt sequence is reproducible")
{
    auto run = [] {
        Engine eng;
        WirelessLinkConfig cfg;
        cfg.target_bler = 0.5;
        WirelessLink link(eng, cfg, RngStream(7, "w2"));
        Recorder a, b;
        a.eng = b.eng = &eng;
        link.attach(0, &a, 0);
        link.attach(1, &b, 0);
        for (int i = 0; i < 50; ++i)
            link.transmit(ptp_frame(), 0);
        eng.run_until(SimTime::from_s(1));
        return std::make_pair(a.attempts, b.delivered.size());
    };
    const auto r1 = run();
    const auto r2 = run();
    CHECK(r1.first == r2.first);
    CHECK(r1.second == r2.second);
}

TEST_CASE("harq first-attempt success statistics at 1% error rate")
{
    Engine eng;
    WirelessLinkConfig cfg;
    cfg.target_bler = 0.01;
    WirelessLink link(eng, cfg, RngStream(11, "stats"));
    Recorder a, b;
    a.eng = b.eng = &eng;
    link.attach(0, &a, 0);
    link.attach(1, &b, 0);

    const int n = 100'000;
    for (int i = 0; i < n; ++i)
        link.transmit(ptp_frame(), 0);
    eng.run_until(SimTime::from_s(5));
    const double frac =
        static_cast<double>(link.first_attempt_successes()) / static_cast<double>(n);
    CHECK(frac > 0.987);
    CHECK(frac < 0.993);
}

TEST_CASE("propagation delay formula")
{
    CHECK(propagation_delay_ps(299.792458, 0.0) == 1'000'000);
    // 150 m / c = 500.35 ns
    CHECK(propagation_delay_ps(150.0, 0.0) == 500'346);
    // The motion divisor is a sub-0.1ps effect at vehicular speeds.
    const auto still = propagation_delay_ps(300.0, 0.0);
    const auto moving = propagation_delay_ps(300.0, 10.0);
    CHECK(std::llabs(static_cast<long long>(still) - static_cast<long long>(moving)) <= 1);
    // Monotone in distance.
    std::uint64_t prev = 0;
    for (double d = 1.0; d < 1000.0; d += 7.3) {
        const auto v = propagation_delay_ps(d, 3.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("periodic load generator hits its configured rate within 1%")
{
    Engine eng;
    LoadConfig cfg;
    cfg.rate_bps = 100'000'000;
    cfg.frame_size_bytes = 1500;
    std::uint64_t bytes = 0;
    LoadGenerator gen(eng, cfg, RngStream(3, "load"), [&](std::size_t b) { bytes += b; });
    gen.start();
    eng.run_until(SimTime::from_s(10));
    const double rate = static_cast<double>(bytes) * 8.0 / 10.0;
    CHECK(rate > 99e6);
    CHECK(rate < 101e6);
}

TEST_CASE("burst load generator long-run mean approaches the midpoint")
{
    Engine eng;
    LoadConfig cfg;
    cfg.pattern = LoadPattern::RandomBurst;
    cfg.burst_lo_bps = 0;
    cfg.burst_hi_bps = 200'000'000;
    cfg.frame_size_bytes = 1500;
    std::uint64_t bytes = 0;
    LoadGenerator gen(eng, cfg, RngStream(5, "burst"), [&](std::size_t b) { bytes += b; });
    gen.start();
    eng.run_until(SimTime::from_s(50));
    const double rate = static_cast<double>(bytes) * 8.0 / 50.0;
    CHECK(rate > 90e6);
    CHECK(rate < 110e6);
}
