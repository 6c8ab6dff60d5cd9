//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <compare>
#include <string>

namespace tsnsim {

/// Simulated time as an integer picosecond count since run start.
/// Integer so that clock-tick quantization and correction-field sums stay
/// exact; 64 bits cover > 10^7 simulated seconds.
struct SimTime {
    std::uint64_t ps = 0;

    auto operator<=>(const SimTime&) const = default;

    static constexpr SimTime from_ps(std::uint64_t v) { return SimTime{v}; }
    static constexpr SimTime from_ns(std::uint64_t v) { return SimTime{v * 1000ull}; }
    static constexpr SimTime from_us(std::uint64_t v) { return SimTime{v * 1000'000ull}; }
    static constexpr SimTime from_ms(std::uint64_t v) { return SimTime{v * 1000'000'000ull}; }
    static constexpr SimTime from_s(std::uint64_t v) { return SimTime{v * 1000'000'000'000ull}; }
    /// Seconds given as a real number; rounds to the nearest picosecond.
    static SimTime from_seconds(double s);

    double seconds() const { return static_cast<double>(ps) * 1e-12; }

    SimTime operator+(std::uint64_t delta_ps) const { return SimTime{ps + delta_ps}; }
    SimTime& operator+=(std::uint64_t delta_ps) { ps += delta_ps; return *this; }
};

/// Protocol timestamps and offsets are integer nanoseconds.
using Nanoseconds = std::int64_t;

constexpr std::uint64_t kPicosPerSecond = 1000'000'000'000ull;
constexpr double kSpeedOfLightMps = 299'792'458.0;

std::string format_seconds(SimTime t);

} // namespace tsnsim
