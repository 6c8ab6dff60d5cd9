//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/ptp.hpp"
#include "support/ledger.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace tsnsim;
using tsnsim::testing::Ledger;
using tsnsim::testing::make_ledger;

TEST_CASE("peer delay hand examples")
{
    CHECK(*peer_delay({0, 500, 600, 1200}, 1.0) == 550);
    CHECK(*peer_delay({0, 0, 0, 0}, 1.0) == 0);
    CHECK(*peer_delay({0, 500, 600, 1200}, 0.999998) == 550);
    CHECK(!peer_delay({0, 500, 5000, 1200}, 1.0)); // negative: fault
}

TEST_CASE("sync offset hand examples")
{
    CHECK(sync_offset({1000, 1600, 30, 0}, 550) == 20);
    CHECK(sync_offset({77, 77, 0, 0}, 0) == 0);
    CHECK(sync_offset({0, 2000, 1400, 0}, 550) == 50);
}

TEST_CASE("direct peer delay")
{
    CHECK(*direct_peer_delay(0, 1000, 0) == 1000);
    CHECK(*direct_peer_delay(0, 1020, 0) == 1020); // residual bias passes through
    CHECK(!direct_peer_delay(1000, 900, 0));       // t6 behind t5: fault
    CHECK(*direct_peer_delay(0, 3000, 1200) == 1800);
}

TEST_CASE("collision compensation formulas")
{
    CHECK(collision_compensation_s1(0, 0, 1.0) == 0);
    CHECK(collision_compensation_s1(40, 100, 1.0) == 30);
    CHECK(collision_compensation_s1(40, 0, 1.0) == -20);

    CHECK(collision_error_s2(0, 0, 1.0) == 0);
    CHECK(collision_error_s2(40, 100, 1.0) == 80);
    CHECK(collision_error_s2(-40, 0, 1.0) == 20);
}

TEST_CASE("mobility error is the delta of the delay gap")
{
    CHECK(mobility_error(0, 0) == 0);
    CHECK(mobility_error(29, 0) == 29);
    CHECK(mobility_error(0, 29) == -29);
}

TEST_CASE("ledger oracle: peer delay and offset recover ground truth")
{
    RngStream rng(101, "ledger");
    for (int i = 0; i < 2000; ++i) {
        const Ledger l = make_ledger(rng);
        const auto d = peer_delay(l.pd, l.true_ratio);
        REQUIRE(d.has_value());
        CHECK(std::llabs(*d - l.expected_delay_master_units) <= 2 * Ledger::kTick);

        const Nanoseconds off = sync_offset(l.sync, *d);
        // bound: quantization plus ratio error over the exchange span
        const double bound = 2.0 * Ledger::kTick + 1.0;
        CHECK(std::abs(static_cast<double>(off - l.expected_offset)) <= bound + 2 * Ledger::kTick);
    }
}

TEST_CASE("ledger oracle: scenario-1 jumps are exactly compensated")
{
    RngStream rng(202, "s1");
    for (int i = 0; i < 2000; ++i) {
        const Ledger l = make_ledger(rng);
        const Nanoseconds jump_parent = rng.uniform_i64(-2000, 2000);
        const Nanoseconds jump_child = rng.uniform_i64(-2000, 2000);

        PdelayTimestamps corrupted = l.pd;
        corrupted.t3 += jump_parent; // responder synced between t2 and t3
        corrupted.t4 += jump_child;  // requester synced between t1 and t4

        const auto clean = peer_delay(l.pd, 1.0);
        const auto bad = peer_delay(corrupted, 1.0);
        REQUIRE(clean.has_value());
        REQUIRE(bad.has_value());
        const Nanoseconds err = *bad - *clean;
        // Integer arithmetic at ratio 1: compensation restores exactly.
        CHECK(std::llabs(err - collision_compensation_s1(jump_parent, jump_child, 1.0)) <= 1);
    }
}

TEST_CASE("ledger oracle: scenario-2 parent term matches the mechanics")
{
    RngStream rng(303, "s2");
    for (int i = 0; i < 2000; ++i) {
        const Ledger l = make_ledger(rng);
        const Nanoseconds jump_parent = rng.uniform_i64(-2000, 2000);
        PdelayTimestamps corrupted = l.pd;
        corrupted.t3 += jump_parent; // child not synced: only t3 moves
        const auto clean = peer_delay(l.pd, 1.0);
        const auto bad = peer_delay(corrupted, 1.0);
        REQUIRE(clean.has_value());
        REQUIRE(bad.has_value());
        // delay bias = -jump/2 = the parent half of Eq.-style s2 error
        CHECK(std::llabs((*bad - *clean) - collision_error_s2(jump_parent, 0, 1.0)) <= 1);
    }
}
