//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/channel.hpp"

#include <cmath>

namespace tsnsim {

std::uint64_t WiredLink::serialization_ps(std::size_t bytes) const
{
    // frame_bits / bandwidth, exact in ps for the bandwidths in use
    return static_cast<std::uint64_t>(bytes) * 8ull * kPicosPerSecond / cfg_.bandwidth_bps;
}

void WiredLink::transmit(Frame f, int from_end)
{
    Direction& d = dir_[from_end];
    if (d.busy || !d.queue.empty()) {
        if (d.queued_bytes + f.size_bytes > cfg_.queue_capacity_bytes) {
            ++d.dropped;
            return;
        }
        d.queued_bytes += f.size_bytes;
        d.queue.push_back(std::move(f));
        return;
    }
    d.queue.push_back(std::move(f));
    d.queued_bytes += d.queue.back().size_bytes;
    start_next(from_end);
}

void WiredLink::start_next(int from_end)
{
    Direction& d = dir_[from_end];
    if (d.queue.empty()) {
        d.busy = false;
        return;
    }
    d.busy = true;
    Frame f = std::move(d.queue.front());
    d.queue.pop_front();
    d.queued_bytes -= f.size_bytes;

    hooks_[from_end]->on_tx_start(f, ports_[from_end], 0);
    const std::uint64_t ser = serialization_ps(f.size_bytes);
    const int to_end = 1 - from_end;

    eng_.after(ser, [this, from_end] { start_next(from_end); });
    eng_.after(ser + cfg_.propagation_ps, [this, to_end, f = std::move(f)] {
        hooks_[to_end]->on_frame(f, ports_[to_end]);
    });
}

std::uint64_t propagation_delay_ps(double distance_m, double v_rel_along_c_mps)
{
    const double denom = std::abs(kSpeedOfLightMps + v_rel_along_c_mps);
    return static_cast<std::uint64_t>(std::llround(distance_m / denom * 1e12));
}

std::uint64_t WirelessLink::true_propagation_ps(SimTime t) const
{
    if (!traj_[0] || !traj_[1])
        return 0;
    const double dist = (traj_[0]->position_at(t) - traj_[1]->position_at(t)).norm();
    return propagation_delay_ps(dist, 0.0);
}

void WirelessLink::transmit(Frame f, int from_end)
{
    ++frames_sent_;
    attempt(std::make_shared<Frame>(std::move(f)), from_end, 0);
}

void WirelessLink::attempt(std::shared_ptr<Frame> f, int from_end, int attempt_idx)
{
    hooks_[from_end]->on_tx_start(*f, ports_[from_end], attempt_idx);
    ++attempts_;

    const bool ok = !rng_.chance(cfg_.target_bler);
    const int to_end = 1 - from_end;
    const SimTime now = eng_.now();

    if (ok) {
        if (attempt_idx == 0)
            ++first_ok_;
        std::uint64_t prop = 0;
        if (traj_[from_end] && traj_[to_end]) {
            const double dist =
                (traj_[to_end]->position_at(now) - traj_[from_end]->position_at(now)).norm();
            const double v = relative_velocity_along_los(*traj_[to_end], *traj_[from_end], now);
            prop = propagation_delay_ps(dist, v);
        }
        eng_.after(cfg_.base_latency_ps + prop, [this, to_end, f] {
            hooks_[to_end]->on_frame(*f, ports_[to_end]);
        });
        eng_.after(cfg_.harq_rtt_ps, [this, from_end, f] {
            hooks_[from_end]->on_mac_ack(*f, ports_[from_end]);
        });
        return;
    }

    if (attempt_idx >= cfg_.harq_max_retx) {
        ++frames_lost_;
        eng_.after(cfg_.harq_rtt_ps, [this, from_end, f] {
            hooks_[from_end]->on_mac_final_nack(*f, ports_[from_end]);
        });
        return;
    }
    eng_.after(cfg_.harq_rtt_ps,
               [this, f, from_end, attempt_idx] { attempt(f, from_end, attempt_idx + 1); });
}

void LoadGenerator::start()
{
    if (cfg_.pattern == LoadPattern::Periodic) {
        if (cfg_.rate_bps == 0)
            return;
        gap_ps_ = static_cast<std::uint64_t>(cfg_.frame_size_bytes) * 8ull * kPicosPerSecond /
                  cfg_.rate_bps;
        eng_.after(gap_ps_, [this] { tick(); });
        return;
    }
    next_epoch();
}

void LoadGenerator::next_epoch()
{
    const double rate = rng_.uniform(static_cast<double>(cfg_.burst_lo_bps),
                                     static_cast<double>(cfg_.burst_hi_bps));
    epoch_end_ps_ = eng_.now().ps + cfg_.burst_epoch_ps;
    if (rate < 1.0) {
        gap_ps_ = 0;
        eng_.at(SimTime{epoch_end_ps_}, [this] { next_epoch(); });
        return;
    }
    gap_ps_ = static_cast<std::uint64_t>(static_cast<double>(cfg_.frame_size_bytes) * 8.0 *
                                         1e12 / rate);
    eng_.after(gap_ps_, [this] { tick(); });
}

void LoadGenerator::tick()
{
    emit_(cfg_.frame_size_bytes);
    bytes_emitted_ += cfg_.frame_size_bytes;
    if (cfg_.pattern == LoadPattern::RandomBurst && eng_.now().ps + gap_ps_ >= epoch_end_ps_) {
        eng_.at(SimTime{epoch_end_ps_}, [this] { next_epoch(); });
        return;
    }
    eng_.after(gap_ps_, [this] { tick(); });
}

} // namespace tsnsim
