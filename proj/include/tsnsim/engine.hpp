//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/time.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tsnsim {

/// Thrown on fatal simulation logic errors (e.g. scheduling into the past).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Engine;

/// Handle returned by Engine::at/after; permits cancellation.
class EventHandle {
public:
    EventHandle() = default;
    void cancel();
    bool pending() const;

private:
    friend class Engine;
    struct Slot;
    explicit EventHandle(std::shared_ptr<Slot> s) : slot_(std::move(s)) {}
    std::shared_ptr<Slot> slot_;
};

struct EventHandle::Slot {
    std::function<void()> fn;
    bool cancelled = false;
};

/// Deterministic discrete-event kernel. Single-threaded: one engine per
/// simulation instance; instances never share state. Events with equal
/// fire time run in insertion order.
class Engine {
public:
    SimTime now() const { return now_; }

    EventHandle at(SimTime t, std::function<void()> fn);
    EventHandle after(std::uint64_t delta_ps, std::function<void()> fn);

    /// Processes every event with fire_at <= end, then advances the clock
    /// to end. Returns the number of events executed.
    std::uint64_t run_until(SimTime end);

    std::uint64_t processed() const { return processed_; }

    /// Rolling FNV-1a digest over (fire_at, insertion seq) of every executed
    /// event; bit-identical across repeated runs of the same scenario+seed.
    std::uint64_t trace_hash() const { return trace_hash_; }

private:
    struct Entry {
        SimTime t;
        std::uint64_t seq;
        std::shared_ptr<EventHandle::Slot> slot;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.t != b.t)
                return b.t < a.t;
            return b.seq < a.seq;
        }
    };

    SimTime now_{0};
    std::uint64_t next_seq_ = 0;
    std::uint64_t processed_ = 0;
    std::uint64_t trace_hash_ = kFnvTraceSeed;
    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;

    static constexpr std::uint64_t kFnvTraceSeed = 14695981039346656037ull;
};

} // namespace tsnsim
