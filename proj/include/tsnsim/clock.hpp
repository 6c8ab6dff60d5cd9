//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/rng.hpp"
#include "tsnsim/time.hpp"

#include <cstdint>
#include <optional>

namespace tsnsim {

enum class CounterMode { SingleCounter, DualCounter };

struct ClockConfig {
    std::uint64_t nominal_freq_hz = 200'000'000; // Table-II default, 5 ns tick
    double drift_ppm = 0.0;
    CounterMode mode = CounterMode::DualCounter;
    Nanoseconds timestamp_jitter_ns = 0; // uniform [0, J] added at capture
    Nanoseconds initial_offset_ns = 0;   // counter phase at power-on
};

/// Drifting oscillator with two counters: local time driven solely by the
/// oscillator, and global time carrying synchronization corrections.
/// In SingleCounter mode both reads resolve to one adjusted counter, so an
/// applied offset shifts subsequently generated message timestamps; that is
/// the collision-error mechanism this simulator reproduces.
///
/// Tick accumulation is exact integer arithmetic: elapsed picoseconds are
/// scaled by (1e12 + drift_ppt) per drift segment, so no floating-point
/// error ever reaches a timestamp.
class OscillatorClock {
public:
    explicit OscillatorClock(const ClockConfig& cfg);

    std::uint64_t tick_ps() const { return tick_ps_; }
    CounterMode mode() const { return cfg_.mode; }
    double drift_ppm() const { return static_cast<double>(drift_ppt_) * 1e-6; }

    /// Free-running oscillator counter, quantized down to the tick, in ns.
    /// In SingleCounter mode it includes every applied offset.
    Nanoseconds local_time(SimTime now) const;

    /// Synchronized time. DualCounter: anchored local time advanced at the
    /// estimated master rate plus the accumulated offset. SingleCounter:
    /// identical to local_time.
    Nanoseconds global_time(SimTime now) const;

    /// Timestamp as captured at the MAC/PHY boundary: local counter (the
    /// adjusted counter in SingleCounter mode) plus optional capture jitter,
    /// quantized to the tick.
    Nanoseconds capture_timestamp(SimTime now, RngStream* jitter);

    /// Applies an Eq.-(5) offset: global time shifts by -offset (positive
    /// offset means this clock is ahead of the master).
    void apply_offset(SimTime now, Nanoseconds offset_ns);

    /// DualCounter only: rate-compensates the global counter so it advances
    /// at ratio x the local rate between corrections.
    void set_rate_compensation(SimTime now, double ratio);
    double rate_compensation() const { return rate_comp_; }

    /// Changes the oscillator drift going forward (random-walk extension);
    /// past time stays exactly as already accumulated.
    void set_drift_ppm(SimTime now, double drift_ppm);

    /// Counts offset applications; a latched timestamp whose epoch differs
    /// from the current one straddled a jump (collision detection).
    std::uint64_t jump_epoch() const { return jump_epoch_; }
    Nanoseconds last_jump_ns() const { return last_jump_ns_; }

    Nanoseconds accumulated_offset_ns() const { return adj_offset_ns_; }

private:
    Nanoseconds raw_local_ns(SimTime now) const;
    void fold_segment(SimTime now);

    ClockConfig cfg_;
    std::uint64_t tick_ps_;
    std::int64_t drift_ppt_; // parts per trillion, exact integer scaling

    // Current drift segment: ticks accumulate as a scaled-picosecond
    // numerator so segment boundaries never round.
    SimTime seg_start_{0};
    unsigned __int128 seg_base_num_ = 0; // sum of elapsed_ps * (1e12 + ppt)

    // Dual-counter global state.
    Nanoseconds g_anchor_ns_ = 0;
    Nanoseconds l_anchor_ns_ = 0;
    double rate_comp_ = 1.0;

    // Single-counter adjustment (also reused as the dual global offset via
    // anchors; kept for bookkeeping).
    Nanoseconds adj_offset_ns_ = 0;

    std::uint64_t jump_epoch_ = 0;
    Nanoseconds last_jump_ns_ = 0;
};

/// Neighbor clock-frequency-ratio estimator from send/receive timestamp
/// pairs of consecutive exchanges: ratio = d(send)/d(receive). Exactly 1
/// until two pairs have been observed. Estimates outside the plausible
/// drift window are rejected and the prior value retained.
class RateRatioEstimator {
public:
    double current_ratio() const { return ratio_; }
    std::uint64_t rejected() const { return rejected_; }
    bool primed() const { return primed_; }

    /// Feeds one (send, receive) observation; returns the updated ratio.
    double update(Nanoseconds send_ts, Nanoseconds recv_ts);

    static constexpr double kMaxDeviation = 50e-6;

private:
    bool primed_ = false;
    Nanoseconds prev_send_ = 0;
    Nanoseconds prev_recv_ = 0;
    double ratio_ = 1.0;
    std::uint64_t rejected_ = 0;
};

} // namespace tsnsim
