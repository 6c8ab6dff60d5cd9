//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/clock.hpp"
#include "tsnsim/engine.hpp"

#include <cmath>

namespace tsnsim {

namespace {
constexpr std::int64_t kPptPerUnit = 1000'000'000'000ll; // 1e12
} // namespace

OscillatorClock::OscillatorClock(const ClockConfig& cfg)
    : cfg_(cfg),
      tick_ps_(kPicosPerSecond / cfg.nominal_freq_hz),
      drift_ppt_(static_cast<std::int64_t>(std::llround(cfg.drift_ppm * 1e6)))
{
    if (cfg.nominal_freq_hz == 0 || kPicosPerSecond % cfg.nominal_freq_hz != 0)
        throw SimulationError("clock frequency must divide 1e12 ps");
    if (tick_ps_ % 1000 != 0)
        throw SimulationError("clock tick must be a whole number of nanoseconds");
    adj_offset_ns_ = cfg.initial_offset_ns;
    g_anchor_ns_ = cfg.initial_offset_ns;
    l_anchor_ns_ = cfg.initial_offset_ns;
}

Nanoseconds OscillatorClock::raw_local_ns(SimTime now) const
{
    const unsigned __int128 elapsed = now.ps - seg_start_.ps;
    const unsigned __int128 num =
        seg_base_num_ + elapsed * static_cast<unsigned __int128>(kPptPerUnit + drift_ppt_);
    const unsigned __int128 ticks = num / (static_cast<unsigned __int128>(kPptPerUnit) * tick_ps_);
    return static_cast<Nanoseconds>(ticks * (tick_ps_ / 1000));
}

Nanoseconds OscillatorClock::local_time(SimTime now) const
{
    Nanoseconds t = raw_local_ns(now);
    if (cfg_.mode == CounterMode::SingleCounter)
        t += adj_offset_ns_;
    else
        t += cfg_.initial_offset_ns;
    return t;
}

Nanoseconds OscillatorClock::global_time(SimTime now) const
{
    if (cfg_.mode == CounterMode::SingleCounter)
        return local_time(now);
    const Nanoseconds local = local_time(now);
    const double advance = static_cast<double>(local - l_anchor_ns_) * rate_comp_;
    Nanoseconds g = g_anchor_ns_ + static_cast<Nanoseconds>(std::llround(advance));
    const Nanoseconds tick_ns = static_cast<Nanoseconds>(tick_ps_ / 1000);
    // Quantize like any other counter read.
    return g - ((g % tick_ns) + tick_ns) % tick_ns;
}

Nanoseconds OscillatorClock::capture_timestamp(SimTime now, RngStream* jitter)
{
    Nanoseconds t = local_time(now);
    if (jitter && cfg_.timestamp_jitter_ns > 0) {
        const Nanoseconds j = jitter->uniform_i64(0, cfg_.timestamp_jitter_ns);
        const Nanoseconds tick_ns = static_cast<Nanoseconds>(tick_ps_ / 1000);
        t += j;
        t -= ((t % tick_ns) + tick_ns) % tick_ns;
    }
    return t;
}

void OscillatorClock::apply_offset(SimTime now, Nanoseconds offset_ns)
{
    if (cfg_.mode == CounterMode::DualCounter) {
        const Nanoseconds g = global_time(now) - offset_ns;
        l_anchor_ns_ = local_time(now);
        g_anchor_ns_ = g;
        adj_offset_ns_ -= offset_ns;
    }
    else {
        adj_offset_ns_ -= offset_ns;
    }
    if (offset_ns != 0) {
        ++jump_epoch_;
        last_jump_ns_ = -offset_ns;
    }
}

void OscillatorClock::set_rate_compensation(SimTime now, double ratio)
{
    if (cfg_.mode != CounterMode::DualCounter)
        return;
    g_anchor_ns_ = global_time(now);
    l_anchor_ns_ = local_time(now);
    rate_comp_ = ratio;
}

void OscillatorClock::set_drift_ppm(SimTime now, double drift_ppm)
{
    fold_segment(now);
    drift_ppt_ = static_cast<std::int64_t>(std::llround(drift_ppm * 1e6));
}

void OscillatorClock::fold_segment(SimTime now)
{
    const unsigned __int128 elapsed = now.ps - seg_start_.ps;
    seg_base_num_ += elapsed * static_cast<unsigned __int128>(kPptPerUnit + drift_ppt_);
    seg_start_ = now;
}

double RateRatioEstimator::update(Nanoseconds send_ts, Nanoseconds recv_ts)
{
    if (!primed_) {
        prev_send_ = send_ts;
        prev_recv_ = recv_ts;
        primed_ = true;
        return ratio_;
    }
    const Nanoseconds ds = send_ts - prev_send_;
    const Nanoseconds dr = recv_ts - prev_recv_;
    if (ds <= 0 || dr <= 0) {
        ++rejected_;
        return ratio_;
    }
    const double r = static_cast<double>(ds) / static_cast<double>(dr);
    if (r < 1.0 - kMaxDeviation || r > 1.0 + kMaxDeviation) {
        ++rejected_;
        prev_send_ = send_ts;
        prev_recv_ = recv_ts;
        return ratio_;
    }
    prev_send_ = send_ts;
    prev_recv_ = recv_ts;
    ratio_ = r;
    return ratio_;
}

} // namespace tsnsim
