//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/rng.hpp"

#include <cmath>

namespace tsnsim {

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_step(std::uint64_t h, std::uint64_t value)
{
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view stream_id)
    : eng_(splitmix64(seed ^ fnv1a64(stream_id))), id_(stream_id)
{
}

std::uint64_t RngStream::next_u64()
{
    return eng_();
}

double RngStream::uniform01()
{
    // 53 random bits into [0, 1); identical on every conforming platform.
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

std::int64_t RngStream::uniform_i64(std::int64_t lo, std::int64_t hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
}

bool RngStream::chance(double p)
{
    return uniform01() < p;
}

double RngStream::normal()
{
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0)
        u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace tsnsim
