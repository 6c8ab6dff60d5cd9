//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/engine.hpp"
#include "tsnsim/metrics.hpp"
#include "tsnsim/scenario.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tsnsim {

/// A node in the abstract topology description.
struct NodeSpec {
    std::string name;
    Vec3 position;
    bool is_ue = false;
    UeMotion motion = UeMotion::Stationary;
    double speed_mps = 0;
    double patrol_w = 0, patrol_h = 0, start_frac = 0, hold_s = 0;
    Vec3 recede_dir{1, 0, 0};
    bool factory_cell = false;
    double cell_size = 0, speed_lo = 0, speed_hi = 0;
    bool line_shuttle = false;
    Vec3 line_a, line_b;
};

struct LinkSpec {
    int a = -1, b = -1;
    bool wireless = false;
    std::uint64_t bandwidth_bps = 1'000'000'000;
};

struct FlowSpec {
    int src = -1, dst = -1;
    LoadConfig cfg;
};

struct Topology {
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    std::vector<FlowSpec> flows;
    int master = 0;
};

Topology build_topology(const Scenario& s);

/// Assembles one simulation instance: engine, clocks, nodes, channels,
/// mobility, load, and the synchronization-error observer. Single-threaded;
/// independent instances may run concurrently.
class World {
public:
    explicit World(const Scenario& s);

    /// Runs to the configured duration, sampling sync error at sample_hz.
    /// Sampling happens between engine steps, never through queued events,
    /// so the event trace is identical with sampling on or off.
    void run(bool collect_samples = true);

    const std::vector<SyncSample>& samples() const { return samples_; }
    const std::vector<LossSyncRecord>& loss_records() const { return loss_records_; }
    Summary summary() const;
    /// Summary with a custom warm-up cut (seconds).
    Summary summary_after(double warmup_s) const;

    Engine& engine() { return engine_; }
    Node& node(int id) { return *nodes_[id]; }
    const Node& node(int id) const { return *nodes_[id]; }
    std::size_t node_count() const { return nodes_.size(); }
    int master_id() const { return master_; }
    const Scenario& scenario() const { return scenario_; }
    const Topology& topology() const { return topo_; }

    NodeStats aggregate_stats() const;
    std::uint64_t trace_hash() const { return engine_.trace_hash(); }
    Nanoseconds current_error(int node_id) const;
    WirelessLink* wireless_link(int index = 0);
    std::uint64_t wired_drops() const;

private:
    void build();
    void sample_now();

    Scenario scenario_;
    Topology topo_;
    Engine engine_;
    int master_ = 0;

    std::vector<std::unique_ptr<Trajectory>> trajectories_;
    std::vector<std::unique_ptr<Link>> links_;
    std::vector<WirelessLink*> wireless_links_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::vector<std::unique_ptr<LoadGenerator>> load_gens_;

    std::vector<SyncSample> samples_;
    std::vector<LossSyncRecord> loss_records_;
};

} // namespace tsnsim
