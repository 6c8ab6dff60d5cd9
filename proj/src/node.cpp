//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/node.hpp"

#include <cmath>

namespace tsnsim {

Node::Node(Engine& eng, int id, std::string name, NodeKind kind, const ClockConfig& clock_cfg,
           const SyncPolicy& policy, std::uint64_t seed)
    : eng_(eng), id_(id), name_(std::move(name)), kind_(kind), clock_(clock_cfg),
      policy_(policy), ts_jitter_(seed, "jitter/" + name_), phase_rng_(seed, "phase/" + name_)
{
}

int Node::add_port(Link* link, int end, bool wireless)
{
    Port p;
    p.link = link;
    p.end = end;
    p.wireless = wireless;
    ports_.push_back(std::move(p));
    const int idx = static_cast<int>(ports_.size()) - 1;
    link->attach(end, this, idx);
    return idx;
}

void Node::set_slave_port(int port)
{
    slave_port_ = port;
    if (port >= 0)
        ports_[port].toward_master = true;
}

void Node::set_next_hop(int dst_node, int port)
{
    if (dst_node >= static_cast<int>(next_hop_.size()))
        next_hop_.resize(dst_node + 1, -1);
    next_hop_[dst_node] = port;
}

Nanoseconds Node::capture_ts()
{
    return clock_.capture_timestamp(eng_.now(), &ts_jitter_);
}

void Node::start()
{
    if (kind_ == NodeKind::Grandmaster && policy_.sync_enabled) {
        gm_next_target_local_ = clock_.local_time(eng_.now()) +
                                static_cast<Nanoseconds>(policy_.sync_interval_ns);
        schedule_gm_tick();
    }
    for (std::size_t i = 0; i < ports_.size(); ++i) {
        Port& p = ports_[i];
        if (!p.wireless) {
            p.periodic_pdelay = true;
        }
        else if (p.toward_master) {
            const bool binding = policy_.binding_on_wireless &&
                                 policy_.mobility_fix == PeerDelayMode::Standard;
            p.periodic_pdelay = !binding;
        }
        if (p.periodic_pdelay)
            schedule_pdelay(static_cast<int>(i));
    }
}

void Node::schedule_gm_tick()
{
    const Nanoseconds cur = clock_.local_time(eng_.now());
    const Nanoseconds delta_ns = gm_next_target_local_ - cur;
    const double scale = 1.0 / (1.0 + clock_.drift_ppm() * 1e-6);
    const std::int64_t delta_ps =
        std::max<std::int64_t>(0, std::llround(static_cast<double>(delta_ns) * 1000.0 * scale));
    eng_.after(static_cast<std::uint64_t>(delta_ps), [this] { gm_tick(); });
}

void Node::gm_tick()
{
    ++gm_seq_;
    for (std::size_t i = 0; i < ports_.size(); ++i) {
        Port& p = ports_[i];
        if (p.fwd.active && !p.fwd.followup_sent) {
            // FollowUp wait exceeded one sync interval: failed round.
            if (p.fwd.awaiting_ack)
                ++stats_.ack_timeouts;
            ++stats_.rounds_failed;
        }
        begin_sync_tx(static_cast<int>(i), gm_seq_);
    }
    ++stats_.syncs_sent;
    gm_next_target_local_ += static_cast<Nanoseconds>(policy_.sync_interval_ns);
    schedule_gm_tick();
}

void Node::begin_sync_tx(int port, std::uint16_t seq)
{
    Port& p = ports_[port];
    p.fwd = SyncForwardSlot{};
    p.fwd.active = true;
    p.fwd.seq = seq;
    p.fwd.sync_uid = next_uid();

    PtpMessage m;
    m.kind = PtpKind::Sync;
    m.seq_id = seq;
    m.source_node = id_;
    m.source_port = port;

    Frame f;
    f.is_ptp = true;
    f.ptp = m;
    f.size_bytes = policy_.ptp_frame_bytes;
    f.src_node = id_;
    f.uid = p.fwd.sync_uid;
    f.has_truth = true;
    p.link->transmit(std::move(f), p.end);
}

void Node::emit_followup(int port)
{
    Port& p = ports_[port];
    if (!p.fwd.active || !p.fwd.content_ready || !p.fwd.egress_latched)
        return;

    double nr = 1.0;
    if (slave_port_ >= 0)
        nr = ports_[slave_port_].neighbor_ratio.current_ratio();
    const double ratio_own = p.fwd.ratio_in * nr;
    const Nanoseconds residence = p.fwd.egress_ts - p.fwd.ingress_ts;
    const Nanoseconds cf =
        p.fwd.cf_base +
        static_cast<Nanoseconds>(std::llround(static_cast<double>(residence) * ratio_own)) +
        static_cast<Nanoseconds>(std::llround(static_cast<double>(p.fwd.pd_in) * p.fwd.ratio_in));

    PtpMessage m;
    m.kind = PtpKind::FollowUp;
    m.seq_id = p.fwd.seq;
    m.origin_ts_ns = p.fwd.origin_ts;
    m.has_origin = true;
    m.correction_ns = cf;
    m.rate_ratio_acc = ratio_own;
    m.source_node = id_;
    m.source_port = port;

    p.fwd.followup_sent = true;
    transmit_ptp(port, m, p.fwd.egress_ts, true);
}

void Node::emit_resp_followup(int port)
{
    Port& p = ports_[port];
    Nanoseconds t3 = p.resp_t3;
    if (clock_.mode() == CounterMode::SingleCounter &&
        clock_.jump_epoch() != p.epoch_at_t2) {
        ++stats_.s1_straddles;
        if (policy_.s1_compensation)
            t3 -= clock_.accumulated_offset_ns() - p.adj_at_t2;
    }
    PtpMessage m;
    m.kind = PtpKind::PdelayRespFollowUp;
    m.seq_id = p.resp_seq;
    m.origin_ts_ns = t3;
    m.has_origin = true;
    m.source_node = id_;
    m.source_port = port;
    transmit_ptp(port, m, p.resp_t3, true);
}

void Node::transmit_ptp(int port, PtpMessage msg, Nanoseconds assumed_egress, bool has_truth)
{
    Port& p = ports_[port];
    Frame f;
    f.is_ptp = true;
    f.ptp = msg;
    f.size_bytes = policy_.ptp_frame_bytes;
    f.src_node = id_;
    f.uid = next_uid();
    f.assumed_primary_egress = assumed_egress;
    f.has_truth = has_truth;
    p.link->transmit(std::move(f), p.end);
}

void Node::on_tx_start(Frame& f, int port, int attempt)
{
    if (!f.is_ptp)
        return;
    Port& p = ports_[port];

    if (f.ptp.kind == PtpKind::Sync && p.fwd.active && f.uid == p.fwd.sync_uid) {
        const Nanoseconds ts = capture_ts();
        p.fwd.egress_latched = true;
        p.fwd.egress_ts = ts;
        f.delivered_egress_ts = ts;
        if (kind_ == NodeKind::Grandmaster) {
            p.fwd.origin_ts = ts;
            p.fwd.ingress_ts = ts;
            p.fwd.content_ready = true;
        }
        if (!p.wireless) {
            if (p.fwd.content_ready && !p.fwd.followup_sent)
                emit_followup(port);
        }
        else if (policy_.harq_gated_followup) {
            p.fwd.awaiting_ack = true;
        }
        else if (p.fwd.content_ready) {
            // Ungated: the tx interrupt of every attempt triggers a FollowUp,
            // each stamped with that attempt's egress time.
            p.fwd.followup_sent = false;
            emit_followup(port);
        }
        (void)attempt;
        return;
    }

    if (f.ptp.kind == PtpKind::PdelayReq && p.req_pending && f.uid == p.req_uid) {
        p.t1 = capture_ts();
        p.adj_at_t1 = clock_.accumulated_offset_ns();
        p.epoch_at_t1 = clock_.jump_epoch();
        return;
    }

    if (f.ptp.kind == PtpKind::PdelayResp && p.resp_active && f.uid == p.resp_uid) {
        p.resp_t3 = capture_ts();
        f.delivered_egress_ts = p.resp_t3;
        if (!p.wireless)
            emit_resp_followup(port);
        else if (policy_.harq_gated_followup)
            p.resp_awaiting_ack = true;
        else
            emit_resp_followup(port);
        return;
    }
}

void Node::on_frame(const Frame& f, int port)
{
    if (!f.is_ptp) {
        if (f.dst_node == id_) {
            stats_.load_bytes_rx += f.size_bytes;
            return;
        }
        if (f.dst_node >= 0 && f.dst_node < static_cast<int>(next_hop_.size()) &&
            next_hop_[f.dst_node] >= 0) {
            Port& out = ports_[next_hop_[f.dst_node]];
            out.link->transmit(f, out.end);
        }
        return;
    }

    switch (f.ptp.kind) {
        case PtpKind::Sync:
            process_sync(f, port);
            break;
        case PtpKind::FollowUp:
            process_followup(f.ptp, f.assumed_primary_egress, port);
            break;
        case PtpKind::PdelayReq:
            process_pdelay_req(f, port);
            break;
        case PtpKind::PdelayResp:
            process_pdelay_resp(f, port);
            break;
        case PtpKind::PdelayRespFollowUp:
            process_pdelay_respfu(f.ptp, port);
            break;
    }
}

void Node::process_sync(const Frame& f, int port)
{
    if (kind_ == NodeKind::Grandmaster || port != slave_port_)
        return;

    if (pending_sync_.valid)
        ++stats_.rounds_failed; // new Sync arrived before the round completed

    pending_sync_.valid = true;
    pending_sync_.seq = f.ptp.seq_id;
    pending_sync_.t6_local = capture_ts();
    pending_sync_.t6_global = clock_.global_time(eng_.now());
    pending_sync_.truth_egress = f.delivered_egress_ts;

    if (kind_ == NodeKind::TransparentClock) {
        ++stats_.syncs_forwarded;
        for (std::size_t i = 0; i < ports_.size(); ++i) {
            if (static_cast<int>(i) == port)
                continue;
            Port& mp = ports_[i];
            if (mp.fwd.active && !mp.fwd.followup_sent && mp.fwd.awaiting_ack)
                ++stats_.ack_timeouts;
            begin_sync_tx(static_cast<int>(i), f.ptp.seq_id);
            mp.fwd.ingress_ts = pending_sync_.t6_local;
        }
    }

    if (fu_buffer_.valid) {
        if (eng_.now() > fu_buffer_.expires) {
            fu_buffer_.valid = false;
            ++stats_.seq_discards;
        }
        else if (fu_buffer_.msg.seq_id == pending_sync_.seq) {
            BufferedFollowUp b = fu_buffer_;
            fu_buffer_.valid = false;
            process_followup(b.msg, b.assumed_egress, port);
        }
    }
}

void Node::process_followup(const PtpMessage& msg, Nanoseconds assumed_egress, int port)
{
    if (kind_ == NodeKind::Grandmaster || port != slave_port_)
        return;

    if (!pending_sync_.valid) {
        // FollowUp ahead of its Sync (wireless reordering) or a duplicate
        // after consumption; hold it for up to one sync interval.
        if (fu_buffer_.valid)
            ++stats_.seq_discards;
        fu_buffer_.valid = true;
        fu_buffer_.msg = msg;
        fu_buffer_.assumed_egress = assumed_egress;
        fu_buffer_.expires = eng_.now() + policy_.sync_interval_ns * 1000ull;
        return;
    }
    if (pending_sync_.seq != msg.seq_id) {
        ++stats_.seq_discards;
        return;
    }

    if (pending_sync_.truth_egress != assumed_egress)
        ++stats_.followup_mismatches;

    if (kind_ == NodeKind::TransparentClock) {
        const Port& sp = ports_[slave_port_];
        for (std::size_t i = 0; i < ports_.size(); ++i) {
            if (static_cast<int>(i) == port)
                continue;
            Port& mp = ports_[i];
            if (!mp.fwd.active || mp.fwd.seq != msg.seq_id)
                continue;
            mp.fwd.origin_ts = msg.origin_ts_ns;
            mp.fwd.cf_base = msg.correction_ns;
            mp.fwd.ratio_in = msg.rate_ratio_acc;
            mp.fwd.pd_in = sp.pd.valid ? sp.pd.measured_delay_ns : 0;
            mp.fwd.content_ready = true;
            if (mp.fwd.egress_latched && !mp.fwd.followup_sent) {
                const bool gated_wait = mp.wireless && policy_.harq_gated_followup &&
                                        mp.fwd.awaiting_ack;
                if (!gated_wait)
                    emit_followup(static_cast<int>(i));
            }
        }
    }

    const Nanoseconds t6g = pending_sync_.t6_global;
    pending_sync_.valid = false;
    complete_sync_round(slave_port_, msg.origin_ts_ns, msg.correction_ns, msg.rate_ratio_acc,
                        t6g);
}

void Node::complete_sync_round(int port, Nanoseconds t5, Nanoseconds cf, double ratio_acc,
                               Nanoseconds t6g)
{
    Port& p = ports_[port];

    if (clock_.mode() == CounterMode::DualCounter)
        clock_.set_rate_compensation(eng_.now(),
                                     ratio_acc * p.neighbor_ratio.current_ratio());

    const PeerDelayMode mode =
        p.wireless ? policy_.mobility_fix : PeerDelayMode::Standard;

    if (mode == PeerDelayMode::DirectAfterConvergence && direct_converged_) {
        SyncTimestamps ts{t5, t6g, cf, 0};
        apply_sync_offset(port, sync_offset(ts, direct_delay_ns_), t6g, t5, cf);
        return;
    }

    const bool binding = p.wireless && policy_.binding_on_wireless &&
                         mode == PeerDelayMode::Standard;
    if (binding) {
        if (binding_.pending)
            ++stats_.rounds_failed; // previous bound exchange never completed
        binding_.pending = true;
        binding_.t5 = t5;
        binding_.t6_global = t6g;
        binding_.cf = cf;
        start_pdelay_exchange(port);
        return;
    }

    if (!p.pd.valid) {
        ++stats_.rounds_skipped_no_delay;
        return;
    }
    SyncTimestamps ts{t5, t6g, cf, 0};
    apply_sync_offset(port, sync_offset(ts, p.pd.measured_delay_ns), t6g, t5, cf);
}

void Node::apply_sync_offset(int port, Nanoseconds offset, Nanoseconds t6g, Nanoseconds t5,
                             Nanoseconds cf)
{
    Port& p = ports_[port];

    clock_.apply_offset(eng_.now(), offset);
    ++stats_.offsets_applied;
    stats_.last_offset_ns = offset;
    sync_successes_.push_back(eng_.now());

    const PeerDelayMode mode =
        p.wireless ? policy_.mobility_fix : PeerDelayMode::Standard;
    if (mode == PeerDelayMode::DirectAfterConvergence && !direct_converged_) {
        if (std::llabs(offset) < policy_.convergence_threshold_ns)
            ++convergence_run_;
        else
            convergence_run_ = 0;
        if (convergence_run_ >= policy_.convergence_streak) {
            direct_converged_ = true;
            // Peer delay as the synchronized clocks now see it; carries the
            // residual sync error as a fixed bias.
            direct_delay_ns_ = t6g - t5 - cf - offset;
            p.pd.mode = PeerDelayMode::DirectAfterConvergence;
            p.pd.converged = true;
            p.periodic_pdelay = false;
        }
    }

    if (on_offset_applied)
        on_offset_applied(*this, offset);
}

void Node::schedule_pdelay(int port)
{
    const double phase = phase_rng_.uniform(0.0, static_cast<double>(policy_.pdelay_interval_ns));
    const std::uint64_t first = static_cast<std::uint64_t>(phase) * 1000ull;
    auto fire = std::make_shared<std::function<void()>>();
    *fire = [this, port, fire] {
        Port& p = ports_[port];
        if (!p.periodic_pdelay)
            return;
        start_pdelay_exchange(port);
        eng_.after(policy_.pdelay_interval_ns * 1000ull, *fire);
    };
    eng_.after(first, *fire);
}

void Node::start_pdelay_exchange(int port)
{
    Port& p = ports_[port];
    if (p.req_pending)
        ++stats_.pdelay_faults; // previous exchange timed out unanswered
    p.req_pending = true;
    ++p.req_seq;
    p.t4_latched = false;
    p.respfu_buffered = false;
    p.req_uid = next_uid();

    PtpMessage m;
    m.kind = PtpKind::PdelayReq;
    m.seq_id = p.req_seq;
    m.source_node = id_;
    m.source_port = port;

    Frame f;
    f.is_ptp = true;
    f.ptp = m;
    f.size_bytes = policy_.ptp_frame_bytes;
    f.src_node = id_;
    f.uid = p.req_uid;
    p.link->transmit(std::move(f), p.end);
}

void Node::process_pdelay_req(const Frame& f, int port)
{
    Port& p = ports_[port];
    p.resp_active = true;
    p.resp_seq = f.ptp.seq_id;
    p.resp_t2 = capture_ts();
    p.adj_at_t2 = clock_.accumulated_offset_ns();
    p.epoch_at_t2 = clock_.jump_epoch();
    p.resp_uid = next_uid();
    p.resp_awaiting_ack = false;

    const std::uint64_t delay =
        p.wireless ? policy_.resp_processing_wireless_ps : policy_.resp_processing_wired_ps;
    const std::uint64_t uid = p.resp_uid;
    eng_.after(delay, [this, port, uid] {
        Port& pp = ports_[port];
        if (!pp.resp_active || pp.resp_uid != uid)
            return;
        PtpMessage m;
        m.kind = PtpKind::PdelayResp;
        m.seq_id = pp.resp_seq;
        m.req_receipt_ns = pp.resp_t2;
        m.source_node = id_;
        m.source_port = port;

        Frame f;
        f.is_ptp = true;
        f.ptp = m;
        f.size_bytes = policy_.ptp_frame_bytes;
        f.src_node = id_;
        f.uid = uid;
        pp.link->transmit(std::move(f), pp.end);
    });
}

void Node::process_pdelay_resp(const Frame& f, int port)
{
    Port& p = ports_[port];
    if (!p.req_pending || f.ptp.seq_id != p.req_seq)
        return;
    p.t4 = capture_ts();
    p.adj_at_t4 = clock_.accumulated_offset_ns();
    p.epoch_at_t4 = clock_.jump_epoch();
    p.t4_latched = true;
    p.t2 = f.ptp.req_receipt_ns;
    if (p.respfu_buffered && p.respfu_seq == p.req_seq)
        finish_pdelay(port, p.respfu_t3);
}

void Node::process_pdelay_respfu(const PtpMessage& msg, int port)
{
    Port& p = ports_[port];
    if (!p.req_pending || msg.seq_id != p.req_seq)
        return;
    if (!p.t4_latched) {
        p.respfu_buffered = true;
        p.respfu_seq = msg.seq_id;
        p.respfu_t3 = msg.origin_ts_ns;
        return;
    }
    finish_pdelay(port, msg.origin_ts_ns);
}

void Node::finish_pdelay(int port, Nanoseconds t3_reported)
{
    Port& p = ports_[port];
    p.req_pending = false;
    ++stats_.pdelay_exchanges;

    Nanoseconds t4 = p.t4;
    if (clock_.mode() == CounterMode::SingleCounter && p.epoch_at_t4 != p.epoch_at_t1) {
        ++stats_.s1_straddles;
        if (policy_.s1_compensation)
            t4 -= p.adj_at_t4 - p.adj_at_t1;
    }

    if (!p.ratio_feed_primed || t4 - p.last_ratio_feed_t4 >=
                                    policy_.ratio_feed_stride_ns) {
        p.neighbor_ratio.update(t3_reported, t4);
        p.last_ratio_feed_t4 = t4;
        p.ratio_feed_primed = true;
    }

    PdelayTimestamps ts{p.t1, p.t2, t3_reported, t4};
    const auto delay = peer_delay(ts, p.neighbor_ratio.current_ratio());
    if (!delay) {
        ++stats_.pdelay_faults;
    }
    else {
        p.pd.measured_delay_ns = *delay;
        p.pd.measured_at = eng_.now();
        p.pd.valid = true;
    }

    if (binding_.pending && port == slave_port_ && delay) {
        SyncTimestamps sts{binding_.t5, binding_.t6_global, binding_.cf, 0};
        binding_.pending = false;
        apply_sync_offset(port, sync_offset(sts, *delay), binding_.t6_global, binding_.t5,
                          binding_.cf);
    }
}

void Node::on_mac_ack(const Frame& f, int port)
{
    Port& p = ports_[port];
    if (p.fwd.active && f.uid == p.fwd.sync_uid && p.fwd.awaiting_ack) {
        p.fwd.awaiting_ack = false;
        if (p.fwd.content_ready && !p.fwd.followup_sent)
            emit_followup(port);
        return;
    }
    if (p.resp_active && f.uid == p.resp_uid && p.resp_awaiting_ack) {
        p.resp_awaiting_ack = false;
        emit_resp_followup(port);
    }
}

void Node::on_mac_final_nack(const Frame& f, int port)
{
    Port& p = ports_[port];
    if (p.fwd.active && f.uid == p.fwd.sync_uid) {
        p.fwd.active = false;
        ++stats_.rounds_failed;
        return;
    }
    if (p.resp_active && f.uid == p.resp_uid)
        p.resp_active = false;
}

void Node::send_load_frame(int dst_node, std::size_t bytes)
{
    if (dst_node >= static_cast<int>(next_hop_.size()) || next_hop_[dst_node] < 0)
        return;
    Port& p = ports_[next_hop_[dst_node]];
    Frame f;
    f.is_ptp = false;
    f.size_bytes = bytes;
    f.src_node = id_;
    f.dst_node = dst_node;
    f.uid = next_uid();
    p.link->transmit(std::move(f), p.end);
}

} // namespace tsnsim
