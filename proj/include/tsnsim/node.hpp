//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/channel.hpp"
#include "tsnsim/clock.hpp"
#include "tsnsim/engine.hpp"
#include "tsnsim/ptp.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tsnsim {

enum class NodeKind { Grandmaster, TransparentClock, SlaveEndpoint };

/// Synchronization behavior knobs, shared by every node in a run.
struct SyncPolicy {
    bool sync_enabled = true;
    std::uint64_t sync_interval_ns = 125'000'000;     // 0.125 s
    std::uint64_t pdelay_interval_ns = 1'000'000'000; // 1 s
    bool harq_gated_followup = true;
    PeerDelayMode mobility_fix = PeerDelayMode::Standard;
    bool binding_on_wireless = true;  // pdelay bound to each sync (wireless slave port)
    bool s1_compensation = false;     // Scenario-1 own-jump timestamp compensation
    Nanoseconds convergence_threshold_ns = 100;
    int convergence_streak = 8;
    std::uint64_t resp_processing_wired_ps = SimTime::from_ms(8).ps;
    std::uint64_t resp_processing_wireless_ps = SimTime::from_ms(1).ps;
    std::size_t ptp_frame_bytes = 128;
    Nanoseconds ratio_feed_stride_ns = 1'000'000'000; // min Eq.-2 baseline
};

struct NodeStats {
    std::uint64_t syncs_sent = 0;
    std::uint64_t syncs_forwarded = 0;
    std::uint64_t offsets_applied = 0;
    std::uint64_t rounds_failed = 0;
    std::uint64_t rounds_skipped_no_delay = 0;
    std::uint64_t seq_discards = 0;
    std::uint64_t followup_mismatches = 0;
    std::uint64_t pdelay_faults = 0;
    std::uint64_t pdelay_exchanges = 0;
    std::uint64_t s1_straddles = 0;
    std::uint64_t ack_timeouts = 0;
    std::uint64_t load_bytes_rx = 0;
    Nanoseconds last_offset_ns = 0;
};

/// One PTP node: grandmaster, peer-to-peer transparent clock, or slave
/// endpoint. All behavior runs on the single-threaded event loop; ports
/// attach to point-to-point links.
class Node : public LinkHooks {
public:
    Node(Engine& eng, int id, std::string name, NodeKind kind, const ClockConfig& clock_cfg,
         const SyncPolicy& policy, std::uint64_t seed);

    int add_port(Link* link, int end, bool wireless);
    void set_slave_port(int port);
    void set_next_hop(int dst_node, int port);

    /// Called once after wiring; schedules sync/pdelay timers.
    void start();

    int id() const { return id_; }
    const std::string& name() const { return name_; }
    NodeKind kind() const { return kind_; }
    OscillatorClock& clock() { return clock_; }
    const OscillatorClock& clock() const { return clock_; }
    const NodeStats& stats() const { return stats_; }
    const std::vector<SimTime>& sync_successes() const { return sync_successes_; }

    Nanoseconds global_now() const { return clock_.global_time(eng_.now()); }

    /// Peer-delay state of a port (tests and metrics).
    const PeerDelayState& port_peer_delay(int port) const { return ports_[port].pd; }
    double port_neighbor_ratio(int port) const
    {
        return ports_[port].neighbor_ratio.current_ratio();
    }
    bool direct_converged() const { return direct_converged_; }
    Nanoseconds direct_delay_ns() const { return direct_delay_ns_; }
    int slave_port() const { return slave_port_; }
    std::size_t port_count() const { return ports_.size(); }
    bool port_wireless(int port) const { return ports_[port].wireless; }

    void send_load_frame(int dst_node, std::size_t bytes);

    // LinkHooks
    void on_tx_start(Frame& f, int port, int attempt) override;
    void on_frame(const Frame& f, int port) override;
    void on_mac_ack(const Frame& f, int port) override;
    void on_mac_final_nack(const Frame& f, int port) override;

    /// Observer invoked after every applied offset (tests/metrics).
    std::function<void(Node&, Nanoseconds)> on_offset_applied;

private:
    struct SyncForwardSlot {
        bool active = false;
        std::uint16_t seq = 0;
        bool egress_latched = false;
        Nanoseconds egress_ts = 0;
        bool awaiting_ack = false;
        bool followup_sent = false;
        bool content_ready = false;
        // FollowUp content, staged when the upstream FollowUp is processed.
        Nanoseconds origin_ts = 0;
        Nanoseconds cf_base = 0;
        double ratio_in = 1.0;
        Nanoseconds ingress_ts = 0; // our Sync ingress (residence base); GM: == egress
        Nanoseconds pd_in = 0;      // ingress-link peer delay snapshot
        std::uint64_t sync_uid = 0;
    };

    struct Port {
        Link* link = nullptr;
        int end = 0;
        bool wireless = false;
        bool toward_master = false;

        // Requester side.
        bool req_pending = false;
        std::uint16_t req_seq = 0;
        Nanoseconds t1 = 0, t2 = 0, t4 = 0;
        Nanoseconds adj_at_t1 = 0, adj_at_t4 = 0;
        std::uint64_t epoch_at_t1 = 0, epoch_at_t4 = 0;
        bool t4_latched = false;
        std::uint64_t req_uid = 0;
        bool respfu_buffered = false;
        Nanoseconds respfu_t3 = 0;
        std::uint16_t respfu_seq = 0;
        bool periodic_pdelay = false;

        // Responder side.
        bool resp_active = false;
        std::uint16_t resp_seq = 0;
        Nanoseconds resp_t2 = 0;
        Nanoseconds adj_at_t2 = 0;
        std::uint64_t epoch_at_t2 = 0;
        bool resp_awaiting_ack = false;
        Nanoseconds resp_t3 = 0;
        std::uint64_t resp_uid = 0;

        // Results.
        PeerDelayState pd;
        RateRatioEstimator neighbor_ratio;
        Nanoseconds last_ratio_feed_t4 = 0;
        bool ratio_feed_primed = false;

        SyncForwardSlot fwd;
    };

    struct PendingSync {
        bool valid = false;
        std::uint16_t seq = 0;
        Nanoseconds t6_local = 0;
        Nanoseconds t6_global = 0;
        Nanoseconds truth_egress = 0;
    };

    struct BufferedFollowUp {
        bool valid = false;
        PtpMessage msg;
        Nanoseconds assumed_egress = 0;
        SimTime expires{0};
    };

    struct BindingStash {
        bool pending = false;
        Nanoseconds t5 = 0;
        Nanoseconds t6_global = 0;
        Nanoseconds cf = 0;
    };

    void schedule_gm_tick();
    void gm_tick();
    void begin_sync_tx(int port, std::uint16_t seq);
    void emit_followup(int port);
    void emit_resp_followup(int port);
    void process_sync(const Frame& f, int port);
    void process_followup(const PtpMessage& msg, Nanoseconds assumed_egress, int port);
    void complete_sync_round(int port, Nanoseconds t5, Nanoseconds cf, double ratio_acc,
                             Nanoseconds t6g);
    void apply_sync_offset(int port, Nanoseconds offset, Nanoseconds t6g, Nanoseconds t5,
                           Nanoseconds cf);
    void schedule_pdelay(int port);
    void start_pdelay_exchange(int port);
    void process_pdelay_req(const Frame& f, int port);
    void process_pdelay_resp(const Frame& f, int port);
    void process_pdelay_respfu(const PtpMessage& msg, int port);
    void finish_pdelay(int port, Nanoseconds t3_reported);
    void transmit_ptp(int port, PtpMessage msg, Nanoseconds assumed_egress = 0,
                      bool has_truth = false);
    Nanoseconds capture_ts();
    std::uint64_t next_uid() { return ++uid_counter_; }

    Engine& eng_;
    int id_;
    std::string name_;
    NodeKind kind_;
    OscillatorClock clock_;
    SyncPolicy policy_;
    RngStream ts_jitter_;
    RngStream phase_rng_;

    std::vector<Port> ports_;
    std::vector<int> next_hop_; // indexed by destination node id
    int slave_port_ = -1;

    std::uint16_t gm_seq_ = 0;
    Nanoseconds gm_next_target_local_ = 0;

    PendingSync pending_sync_;
    BufferedFollowUp fu_buffer_;
    BindingStash binding_;

    bool direct_converged_ = false;
    Nanoseconds direct_delay_ns_ = 0;
    int convergence_run_ = 0;

    NodeStats stats_;
    std::vector<SimTime> sync_successes_;
    std::uint64_t uid_counter_ = 0;
};

} // namespace tsnsim
