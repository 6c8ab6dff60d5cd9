//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/mobility.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsnsim;

TEST_CASE("fixed trajectory never moves")
{
    FixedTrajectory t({0, 0, 1.5});
    for (std::uint64_t s : {0ull, 1ull, 7ull, 3600ull}) {
        const Vec3 p = t.position_at(SimTime::from_s(s));
        CHECK(p.x == 0);
        CHECK(p.z == 1.5);
    }
}

TEST_CASE("uniform linear position")
{
    UniformLinearTrajectory t({10, 0, 1.5}, {10, 0, 0});
    const Vec3 p = t.position_at(SimTime::from_s(2));
    CHECK(p.x == doctest::Approx(30.0));
    CHECK(p.y == 0);
    CHECK(p.z == 1.5);
}

TEST_CASE("uniform linear honors the bootstrap hold")
{
    UniformLinearTrajectory t({10, 0, 1.5}, {10, 0, 0}, 5.0);
    CHECK(t.position_at(SimTime::from_s(5)).x == doctest::Approx(10.0));
    CHECK(t.position_at(SimTime::from_s(7)).x == doctest::Approx(30.0));
    CHECK(t.velocity_at(SimTime::from_s(3)).x == 0.0);
    CHECK(t.velocity_at(SimTime::from_s(6)).x == doctest::Approx(10.0));
}

TEST_CASE("rectangle patrol closes its loop")
{
    // 200 m perimeter at 10 m/s: the period is 20 s.
    RectanglePatrolTrajectory t({0, 0, 1.5}, 50, 50, 10);
    const Vec3 a = t.position_at(SimTime{0});
    const Vec3 b = t.position_at(SimTime::from_s(20));
    CHECK((a - b).norm() < 1e-6);
    const Vec3 mid = t.position_at(SimTime::from_s(10));
    CHECK((a - mid).norm() > 10.0);
}

TEST_CASE("patrol speed bound holds under numeric differentiation")
{
    RectanglePatrolTrajectory t({0, 0, 1.5}, 50, 30, 7.5);
    const double dt = 0.001;
    for (int i = 0; i < 40000; ++i) {
        const SimTime t0 = SimTime::from_ps(static_cast<std::uint64_t>(i) * 1'000'000'000ull);
        const SimTime t1 = SimTime::from_ps(t0.ps + 1'000'000'000ull);
        const double d = (t.position_at(t1) - t.position_at(t0)).norm();
        CHECK(d <= 7.5 * dt + 1e-6);
    }
}

TEST_CASE("line patrol ping-pongs between its endpoints")
{
    LinePatrolTrajectory t({0, 0, 1.5}, {100, 0, 1.5}, 10);
    CHECK(t.position_at(SimTime::from_s(5)).x == doctest::Approx(50));
    CHECK(t.position_at(SimTime::from_s(10)).x == doctest::Approx(100));
    CHECK(t.position_at(SimTime::from_s(15)).x == doctest::Approx(50));
    CHECK(t.position_at(SimTime::from_s(20)).x == doctest::Approx(0));
    CHECK(t.velocity_at(SimTime::from_s(5)).x == doctest::Approx(10));
    CHECK(t.velocity_at(SimTime::from_s(15)).x == doctest::Approx(-10));
}

TEST_CASE("factory patrol stays inside its cell and redraw stays in range")
{
    FactoryPatrolTrajectory t({100, 100, 1.5}, 25, 5, 10, 42, "cell-test");
    for (int i = 0; i < 2000; ++i) {
        const Vec3 p = t.position_at(SimTime::from_ms(static_cast<std::uint64_t>(i) * 50));
        CHECK(p.x >= 100 - 12.5 - 1e-9);
        CHECK(p.x <= 100 + 12.5 + 1e-9);
        CHECK(p.y >= 100 - 12.5 - 1e-9);
        CHECK(p.y <= 100 + 12.5 + 1e-9);
        const double v = t.velocity_at(SimTime::from_ms(static_cast<std::uint64_t>(i) * 50)).norm();
        CHECK(v >= 5.0 - 1e-9);
        CHECK(v <= 10.0 + 1e-9);
    }
}

TEST_CASE("relative velocity along line of sight")
{
    FixedTrajectory gnb({0, 0, 25});
    SUBCASE("stationary pair") {
        FixedTrajectory ue({30, 0, 1.5});
        CHECK(relative_velocity_along_los(ue, gnb, SimTime::from_s(1)) == 0.0);
    }
    SUBCASE("pure radial recession") {
        // Receding along the line of sight itself: projection equals speed.
        UniformLinearTrajectory ue({30, 0, 25}, {10, 0, 0});
        CHECK(relative_velocity_along_los(ue, gnb, SimTime::from_s(2)) == doctest::Approx(10.0));
    }
    SUBCASE("pure tangential motion") {
        UniformLinearTrajectory ue({0, 40, 25}, {10, 0, 0});
        CHECK(relative_velocity_along_los(ue, gnb, SimTime{0}) == doctest::Approx(0.0));
    }
}
