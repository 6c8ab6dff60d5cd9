//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace tsnsim {

/// Named pseudo-random stream. One stream per stochastic consumer so that
/// adding a consumer never perturbs the draws of another. Same
/// (seed, stream_id) gives the identical sequence on every platform:
/// mt19937_64 is fully specified by the standard and all derived draws
/// below avoid implementation-defined distributions.
class RngStream {
public:
    RngStream() : RngStream(0, "default") {}
    RngStream(std::uint64_t seed, std::string_view stream_id);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform01();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_i64(std::int64_t lo, std::int64_t hi);

    /// Bernoulli draw.
    bool chance(double p);

    /// Standard normal via Box-Muller (deterministic, no cached spare).
    double normal();

    const std::string& id() const { return id_; }

private:
    std::mt19937_64 eng_;
    std::string id_;
};

/// FNV-1a 64-bit hash; used for stream-id mixing and trace digests.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_step(std::uint64_t h, std::uint64_t value);
constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;

} // namespace tsnsim
