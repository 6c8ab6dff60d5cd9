//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/engine.hpp"
#include "tsnsim/mobility.hpp"
#include "tsnsim/ptp.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/time.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>

namespace tsnsim {

/// Unit carried by links: either a PTP message or background load.
struct Frame {
    bool is_ptp = false;
    PtpMessage ptp;
    std::size_t size_bytes = 1500;
    int src_node = -1;
    int dst_node = -1; // routed load traffic only; PTP is per-link
    std::uint64_t uid = 0;

    // Simulator ground truth, not protocol content.
    Nanoseconds delivered_egress_ts = 0;  // sender capture at the delivering attempt
    Nanoseconds assumed_primary_egress = 0; // what a companion message believed
    bool has_truth = false;
};

/// Callbacks a link makes into its endpoints. `attempt` is 0 for wired and
/// the HARQ attempt index for wireless.
class LinkHooks {
public:
    virtual ~LinkHooks() = default;
    virtual void on_tx_start(Frame& f, int port, int attempt) = 0;
    virtual void on_frame(const Frame& f, int port) = 0;
    virtual void on_mac_ack(const Frame&, int) {}
    virtual void on_mac_final_nack(const Frame&, int) {}
};

class Link {
public:
    virtual ~Link() = default;
    virtual void transmit(Frame f, int from_end) = 0;
    virtual bool wireless() const = 0;

    void attach(int end, LinkHooks* hooks, int port)
    {
        hooks_[end] = hooks;
        ports_[end] = port;
    }

protected:
    LinkHooks* hooks_[2] = {nullptr, nullptr};
    int ports_[2] = {-1, -1};
};

struct WiredLinkConfig {
    std::uint64_t bandwidth_bps = 1'000'000'000;
    std::uint64_t propagation_ps = 50'000; // 50 ns, ~10 m of cable
    std::size_t queue_capacity_bytes = 262'144;
};

/// Full-duplex store-and-forward Ethernet link with one FIFO per direction.
/// Egress timestamps latch at transmission start, ingress at reception end,
/// so measured link delay equals serialization plus propagation.
class WiredLink final : public Link {
public:
    WiredLink(Engine& eng, const WiredLinkConfig& cfg) : eng_(eng), cfg_(cfg) {}

    void transmit(Frame f, int from_end) override;
    bool wireless() const override { return false; }

    std::uint64_t dropped() const { return dir_[0].dropped + dir_[1].dropped; }
    std::uint64_t serialization_ps(std::size_t bytes) const;

private:
    struct Direction {
        std::deque<Frame> queue;
        std::size_t queued_bytes = 0;
        bool busy = false;
        std::uint64_t dropped = 0;
    };
    void start_next(int from_end);

    Engine& eng_;
    WiredLinkConfig cfg_;
    Direction dir_[2];
};

struct WirelessLinkConfig {
    double target_bler = 1e-6;          // Table II: 0.0001 %
    int harq_max_retx = 4;
    std::uint64_t harq_rtt_ps = SimTime::from_us(500).ps;
    std::uint64_t base_latency_ps = SimTime::from_us(200).ps;
};

/// Frame-level 5G hop: per-attempt block errors with HARQ retransmission
/// and MAC ACK/NACK signalling back to the sender. Attempts are independent
/// draws from this link's RNG stream; propagation follows the endpoint
/// geometry at each attempt. In-flight frames are independent, so a later
/// frame may overtake a retransmitting one.
class WirelessLink final : public Link {
public:
    WirelessLink(Engine& eng, const WirelessLinkConfig& cfg, RngStream rng)
        : eng_(eng), cfg_(cfg), rng_(std::move(rng)) {}

    /// Endpoint trajectories; end 0 and end 1 in attach() order.
    void set_geometry(const Trajectory* end0, const Trajectory* end1)
    {
        traj_[0] = end0;
        traj_[1] = end1;
    }

    void transmit(Frame f, int from_end) override;
    bool wireless() const override { return true; }

    /// True one-way propagation delay at time t (test/metrics oracle).
    std::uint64_t true_propagation_ps(SimTime t) const;

    const WirelessLinkConfig& config() const { return cfg_; }
    std::uint64_t frames_lost() const { return frames_lost_; }
    std::uint64_t attempts_made() const { return attempts_; }
    std::uint64_t first_attempt_successes() const { return first_ok_; }
    std::uint64_t frames_sent() const { return frames_sent_; }

private:
    void attempt(std::shared_ptr<Frame> f, int from_end, int attempt_idx);

    Engine& eng_;
    WirelessLinkConfig cfg_;
    RngStream rng_;
    const Trajectory* traj_[2] = {nullptr, nullptr};
    std::uint64_t frames_lost_ = 0;
    std::uint64_t attempts_ = 0;
    std::uint64_t first_ok_ = 0;
    std::uint64_t frames_sent_ = 0;
};

/// Propagation delay under relative motion: distance / |c + v_along_los|,
/// v positive when receding. The divisor term is negligible at vehicular
/// speeds; what matters is the distance changing between measurements.
std::uint64_t propagation_delay_ps(double distance_m, double v_rel_along_c_mps);

enum class LoadPattern { Periodic, RandomBurst };

struct LoadConfig {
    std::uint64_t rate_bps = 100'000'000;
    std::size_t frame_size_bytes = 1500;
    LoadPattern pattern = LoadPattern::Periodic;
    std::uint64_t burst_lo_bps = 0;   // RandomBurst: rate redrawn each epoch
    std::uint64_t burst_hi_bps = 0;
    std::uint64_t burst_epoch_ps = SimTime::from_ms(50).ps;
};

/// Emits background frames from a source node toward a destination through
/// whatever forwarding the owner wires up.
class LoadGenerator {
public:
    using EmitFn = std::function<void(std::size_t bytes)>;

    LoadGenerator(Engine& eng, const LoadConfig& cfg, RngStream rng, EmitFn emit)
        : eng_(eng), cfg_(cfg), rng_(std::move(rng)), emit_(std::move(emit)) {}

    void start();
    std::uint64_t bytes_emitted() const { return bytes_emitted_; }

private:
    void tick();
    void next_epoch();

    Engine& eng_;
    LoadConfig cfg_;
    RngStream rng_;
    EmitFn emit_;
    std::uint64_t gap_ps_ = 0;
    std::uint64_t epoch_end_ps_ = 0;
    std::uint64_t bytes_emitted_ = 0;
};

} // namespace tsnsim
