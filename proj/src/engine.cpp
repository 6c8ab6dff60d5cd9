//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/engine.hpp"
#include "tsnsim/rng.hpp"

#include <cmath>
#include <cstdio>

namespace tsnsim {

SimTime SimTime::from_seconds(double s)
{
    return SimTime{static_cast<std::uint64_t>(std::llround(s * 1e12))};
}

std::string format_seconds(SimTime t)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%llu.%06llu",
                  static_cast<unsigned long long>(t.ps / kPicosPerSecond),
                  static_cast<unsigned long long>(t.ps % kPicosPerSecond / 1000'000ull));
    return buf;
}

void EventHandle::cancel()
{
    if (slot_)
        slot_->cancelled = true;
}

bool EventHandle::pending() const
{
    return slot_ && !slot_->cancelled && slot_->fn != nullptr;
}

EventHandle Engine::at(SimTime t, std::function<void()> fn)
{
    if (t < now_)
        throw SimulationError("schedule into the past: event at " + format_seconds(t) +
                              "s, now " + format_seconds(now_) + "s");
    auto slot = std::make_shared<EventHandle::Slot>();
    slot->fn = std::move(fn);
    queue_.push(Entry{t, next_seq_++, slot});
    return EventHandle{slot};
}

EventHandle Engine::after(std::uint64_t delta_ps, std::function<void()> fn)
{
    return at(SimTime{now_.ps + delta_ps}, std::move(fn));
}

std::uint64_t Engine::run_until(SimTime end)
{
    std::uint64_t executed = 0;
    while (!queue_.empty() && queue_.top().t <= end) {
        Entry e = queue_.top();
        queue_.pop();
        now_ = e.t;
        if (e.slot->cancelled)
            continue;
        auto fn = std::move(e.slot->fn);
        e.slot->fn = nullptr;
        trace_hash_ = fnv1a64_step(trace_hash_, e.t.ps);
        trace_hash_ = fnv1a64_step(trace_hash_, e.seq);
        ++processed_;
        ++executed;
        fn();
    }
    now_ = end;
    return executed;
}

} // namespace tsnsim
