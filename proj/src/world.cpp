//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace tsnsim {

namespace {

NodeSpec make_fixed(std::string name, Vec3 pos)
{
    NodeSpec n;
    n.name = std::move(name);
    n.position = pos;
    return n;
}

Topology build_baseline(const Scenario& s)
{
    // tsn_gm - sw1 - sw2 - core - gnb ~ ue, endpoints off sw1/sw2.
    Topology t;
    const double zu = s.ue_antenna_height_m;
    t.nodes.push_back(make_fixed("tsn_gm", {-40, 0, 0}));
    t.nodes.push_back(make_fixed("sw1", {-30, 0, 0}));
    t.nodes.push_back(make_fixed("sw2", {-20, 0, 0}));
    t.nodes.push_back(make_fixed("core", {-10, 0, 0}));
    t.nodes.push_back(make_fixed("gnb", {0, 0, s.gnb_antenna_height_m}));

    NodeSpec ue = make_fixed("ue", {30, 0, zu});
    ue.is_ue = true;
    ue.motion = s.ue_motion;
    ue.speed_mps = s.ue_speed_mps;
    ue.hold_s = s.motion_hold_s;
    ue.patrol_w = s.patrol_width_m;
    ue.patrol_h = s.patrol_height_m;
    ue.start_frac = s.patrol_start_frac;
    ue.recede_dir = {1, 0, 0};
    t.nodes.push_back(ue);

    t.nodes.push_back(make_fixed("tsn_ep1", {-30, 10, 0}));
    t.nodes.push_back(make_fixed("tsn_ep2", {-20, 10, 0}));

    t.links.push_back({0, 1, false, s.tsn_bandwidth_bps});
    t.links.push_back({1, 2, false, s.tsn_bandwidth_bps});
    t.links.push_back({2, 3, false, s.core_bandwidth_bps});
    t.links.push_back({3, 4, false, s.core_bandwidth_bps});
    t.links.push_back({4, 5, true, 0});
    t.links.push_back({1, 6, false, s.tsn_bandwidth_bps});
    t.links.push_back({2, 7, false, s.tsn_bandwidth_bps});

    switch (s.master) {
        case MasterPlacement::TSN: t.master = 0; break;
        case MasterPlacement::GNB: t.master = 4; break;
        case MasterPlacement::UE: t.master = 5; break;
    }

    if (s.load_rate_bps > 0) {
        FlowSpec f;
        f.src = 6;
        f.dst = 7;
        f.cfg.rate_bps = s.load_rate_bps;
        f.cfg.frame_size_bytes = s.load_frame_bytes;
        f.cfg.pattern = s.load_pattern;
        f.cfg.burst_lo_bps = 0;
        f.cfg.burst_hi_bps =
            static_cast<std::uint64_t>(s.load_burst_factor * static_cast<double>(s.load_rate_bps));
        f.cfg.burst_epoch_ps = static_cast<std::uint64_t>(s.load_burst_epoch_ms * 1e9);
        t.flows.push_back(f);
    }
    return t;
}

Topology build_chain(const Scenario& s)
{
    Topology t;
    const int hops = std::max(2, s.chain_hops);
    t.nodes.push_back(make_fixed("gm", {0, 0, 0}));
    for (int i = 1; i < hops; ++i)
        t.nodes.push_back(make_fixed("sw" + std::to_string(i), {10.0 * i, 0, 0}));
    t.nodes.push_back(make_fixed("ep", {10.0 * hops, 0, 0}));
    for (int i = 0; i < hops; ++i)
        t.links.push_back({i, i + 1, false, s.tsn_bandwidth_bps});
    t.master = 0;

    if (s.chain_load_taps && s.load_rate_bps > 0 && hops >= 3) {
        const int src = static_cast<int>(t.nodes.size());
        t.nodes.push_back(make_fixed("load_src", {10, 10, 0}));
        t.links.push_back({src, 1, false, s.tsn_bandwidth_bps});
        FlowSpec f;
        f.src = src;
        f.dst = hops; // the far endpoint; load shares every chain queue
        f.cfg.rate_bps = s.load_rate_bps;
        f.cfg.frame_size_bytes = s.load_frame_bytes;
        f.cfg.pattern = s.load_pattern;
        f.cfg.burst_lo_bps = 0;
        f.cfg.burst_hi_bps =
            static_cast<std::uint64_t>(s.load_burst_factor * static_cast<double>(s.load_rate_bps));
        f.cfg.burst_epoch_ps = static_cast<std::uint64_t>(s.load_burst_epoch_ms * 1e9);
        t.flows.push_back(f);
    }
    return t;
}

Topology build_factory(const Scenario& s)
{
    Topology t;
    const int n = std::max(2, s.factory_grid);
    const double pitch = 50.0;
    const double floor_m = pitch * n;
    const double zg = s.gnb_antenna_height_m;
    const double zu = s.ue_antenna_height_m;

    t.nodes.push_back(make_fixed("tsn_gm", {-30, floor_m / 2, 0})); // 0
    t.nodes.push_back(make_fixed("tsn_sw", {-20, floor_m / 2, 0})); // 1
    t.nodes.push_back(make_fixed("core", {-10, floor_m / 2, 0}));   // 2
    t.links.push_back({0, 1, false, s.tsn_bandwidth_bps});
    t.links.push_back({1, 2, false, s.core_bandwidth_bps});

    std::vector<int> gnb_ids;
    for (int i = 0; i < n; ++i) {
        const int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back(
            make_fixed("gnb" + std::to_string(i), {pitch * i + pitch / 2, floor_m / 2, zg}));
        t.links.push_back({2, id, false, s.core_bandwidth_bps});
        gnb_ids.push_back(id);
    }

    auto attach_ue = [&](NodeSpec spec, Vec3 home) {
        spec.position = home;
        const int id = static_cast<int>(t.nodes.size());
        // Nearest gNB in the xy plane serves this robot.
        int best = gnb_ids[0];
        double best_d = 1e18;
        for (int g : gnb_ids) {
            const Vec3 gp = t.nodes[g].position;
            const double d = std::hypot(gp.x - home.x, gp.y - home.y);
            if (d < best_d) {
                best_d = d;
                best = g;
            }
        }
        t.nodes.push_back(spec);
        t.links.push_back({best, id, true, 0});
        return id;
    };

    // One task robot per 50 m cell, each patrolling its 25 m x 25 m area.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            NodeSpec u;
            u.name = "robot_" + std::to_string(i) + "_" + std::to_string(j);
            u.is_ue = true;
            u.factory_cell = true;
            u.cell_size = s.factory_cell_m;
            u.speed_lo = s.factory_speed_lo_mps;
            u.speed_hi = s.factory_speed_hi_mps;
            attach_ue(u, {pitch * i + pitch / 2, pitch * j + pitch / 2, zu});
        }
    }
    // Transport robots shuttle along the full row/column boundaries.
    for (int k = 1; k < n; ++k) {
        NodeSpec h;
        h.name = "transport_h" + std::to_string(k);
        h.is_ue = true;
        h.line_shuttle = true;
        h.speed_lo = s.factory_speed_lo_mps;
        h.speed_hi = s.factory_speed_hi_mps;
        h.line_a = {0, pitch * k, zu};
        h.line_b = {floor_m, pitch * k, zu};
        attach_ue(h, {floor_m / 2, pitch * k, zu});

        NodeSpec v;
        v.name = "transport_v" + std::to_string(k);
        v.is_ue = true;
        v.line_shuttle = true;
        v.speed_lo = s.factory_speed_lo_mps;
        v.speed_hi = s.factory_speed_hi_mps;
        v.line_a = {pitch * k, 0, zu};
        v.line_b = {pitch * k, floor_m, zu};
        attach_ue(v, {pitch * k, floor_m / 2, zu});
    }

    // Industrial flows across the backbone: one periodic, one bursty.
    const int src1 = static_cast<int>(t.nodes.size());
    t.nodes.push_back(make_fixed("flow_src1", {-20, floor_m / 2 + 10, 0}));
    t.links.push_back({src1, 1, false, s.tsn_bandwidth_bps});
    const int src2 = static_cast<int>(t.nodes.size());
    t.nodes.push_back(make_fixed("flow_src2", {-20, floor_m / 2 - 10, 0}));
    t.links.push_back({src2, 1, false, s.tsn_bandwidth_bps});

    FlowSpec periodic;
    periodic.src = src1;
    periodic.dst = gnb_ids.front();
    periodic.cfg.rate_bps = s.factory_periodic_bps;
    periodic.cfg.frame_size_bytes = s.load_frame_bytes;
    periodic.cfg.pattern = LoadPattern::Periodic;
    t.flows.push_back(periodic);

    FlowSpec burst;
    burst.src = src2;
    burst.dst = gnb_ids.back();
    burst.cfg.rate_bps = s.factory_burst_hi_bps / 2;
    burst.cfg.frame_size_bytes = s.load_frame_bytes;
    burst.cfg.pattern = LoadPattern::RandomBurst;
    burst.cfg.burst_lo_bps = 0;
    burst.cfg.burst_hi_bps = s.factory_burst_hi_bps;
    burst.cfg.burst_epoch_ps = static_cast<std::uint64_t>(s.load_burst_epoch_ms * 1e9);
    t.flows.push_back(burst);

    t.master = s.master == MasterPlacement::GNB ? gnb_ids[gnb_ids.size() / 2] : 0;
    return t;
}

/// Perimeter fraction whose 3D distance to `from` is closest to the middle
/// of the [min, max] distance range; used to start patrols at a mid-range
/// point.
double mid_range_start_frac(const RectanglePatrolTrajectory& probe, Vec3 from)
{
    double dmin = 1e18, dmax = 0;
    const int steps = 4000;
    std::vector<double> dist(steps);
    for (int i = 0; i < steps; ++i) {
        const SimTime t = SimTime::from_ps(static_cast<std::uint64_t>(i) * 1000'000ull);
        const double d = (probe.position_at(t) - from).norm();
        dist[i] = d;
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    const double target = (dmin + dmax) / 2;
    int best = 0;
    double best_err = 1e18;
    for (int i = 0; i < steps; ++i) {
        const double e = std::abs(dist[i] - target);
        if (e < best_err) {
            best_err = e;
            best = i;
        }
    }
    return static_cast<double>(best) / steps;
}

} // namespace

Topology build_topology(const Scenario& s)
{
    switch (s.topology) {
        case TopologyKind::Baseline: return build_baseline(s);
        case TopologyKind::Chain: return build_chain(s);
        case TopologyKind::Factory: return build_factory(s);
    }
    throw ConfigError("unknown topology");
}

World::World(const Scenario& s) : scenario_(s), topo_(build_topology(s))
{
    build();
}

void World::build()
{
    const Scenario& s = scenario_;
    master_ = topo_.master;
    const std::size_t n = topo_.nodes.size();

    // Trajectories. Fixed for wired gear; UEs move per spec.
    trajectories_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeSpec& spec = topo_.nodes[i];
        if (!spec.is_ue || spec.motion == UeMotion::Stationary) {
            if (spec.factory_cell) {
                trajectories_[i] = std::make_unique<FactoryPatrolTrajectory>(
                    spec.position, spec.cell_size, spec.speed_lo, spec.speed_hi, s.seed,
                    "traj/" + spec.name);
                continue;
            }
            if (spec.line_shuttle) {
                RngStream r(s.seed, "traj/" + spec.name);
                const double v = r.uniform(spec.speed_lo, spec.speed_hi);
                trajectories_[i] =
                    std::make_unique<LinePatrolTrajectory>(spec.line_a, spec.line_b, v,
                                                           r.uniform01());
                continue;
            }
            trajectories_[i] = std::make_unique<FixedTrajectory>(spec.position);
            continue;
        }
        if (spec.motion == UeMotion::Recede) {
            trajectories_[i] = std::make_unique<UniformLinearTrajectory>(
                spec.position, spec.recede_dir * spec.speed_mps, spec.hold_s);
            continue;
        }
        // Patrol around the serving gNB's ground position.
        Vec3 center = spec.position;
        for (const auto& l : topo_.links) {
            if (!l.wireless)
                continue;
            if (l.a == static_cast<int>(i) || l.b == static_cast<int>(i)) {
                const int g = l.a == static_cast<int>(i) ? l.b : l.a;
                center = topo_.nodes[g].position;
                center.z = spec.position.z;
                break;
            }
        }
        double frac = spec.start_frac;
        if (frac < 0) {
            RectanglePatrolTrajectory probe(center, spec.patrol_w, spec.patrol_h,
                                            spec.speed_mps, 0.0, 0.0);
            Vec3 gnb_pos = center;
            gnb_pos.z = s.gnb_antenna_height_m;
            frac = mid_range_start_frac(probe, gnb_pos);
        }
        trajectories_[i] = std::make_unique<RectanglePatrolTrajectory>(
            center, spec.patrol_w, spec.patrol_h, spec.speed_mps, frac, spec.hold_s);
    }

    // Links.
    links_.resize(topo_.links.size());
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const LinkSpec& ls = topo_.links[li];
        if (ls.wireless) {
            auto wl = std::make_unique<WirelessLink>(
                engine_, s.make_wireless_config(),
                RngStream(s.seed, "wireless/" + topo_.nodes[ls.a].name + "-" +
                                      topo_.nodes[ls.b].name));
            wl->set_geometry(trajectories_[ls.a].get(), trajectories_[ls.b].get());
            wireless_links_.push_back(wl.get());
            links_[li] = std::move(wl);
        }
        else {
            WiredLinkConfig wc;
            wc.bandwidth_bps = ls.bandwidth_bps;
            wc.propagation_ps = s.wired_propagation_ns * 1000ull;
            wc.queue_capacity_bytes = s.wired_queue_bytes;
            links_[li] = std::make_unique<WiredLink>(engine_, wc);
        }
    }

    // Roles from the master by breadth-first search over the (tree) topology.
    std::vector<std::vector<std::pair<int, int>>> adj(n); // (peer, link index)
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        adj[topo_.links[li].a].push_back({topo_.links[li].b, static_cast<int>(li)});
        adj[topo_.links[li].b].push_back({topo_.links[li].a, static_cast<int>(li)});
    }
    std::vector<int> parent_link(n, -1);
    std::vector<int> parent(n, -1);
    std::vector<bool> seen(n, false);
    std::deque<int> bfs{master_};
    seen[master_] = true;
    while (!bfs.empty()) {
        const int u = bfs.front();
        bfs.pop_front();
        for (auto [v, li] : adj[u]) {
            if (seen[v])
                continue;
            seen[v] = true;
            parent[v] = u;
            parent_link[v] = li;
            bfs.push_back(v);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i])
            throw ConfigError("topology is not connected");

    const SyncPolicy policy = s.make_policy();
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeSpec& spec = topo_.nodes[i];
        NodeKind kind;
        if (static_cast<int>(i) == master_)
            kind = NodeKind::Grandmaster;
        else if (adj[i].size() <= 1)
            kind = NodeKind::SlaveEndpoint;
        else
            kind = NodeKind::TransparentClock;

        ClockConfig cc;
        cc.nominal_freq_hz = s.clock_frequency_hz;
        cc.mode = s.counter_mode;
        cc.timestamp_jitter_ns = s.timestamp_jitter_ns;
        RngStream cr(s.seed, "clock/" + spec.name);
        if (static_cast<int>(i) == master_) {
            cc.drift_ppm = cr.uniform(s.master_drift_ppm_lo, s.master_drift_ppm_hi);
            cc.initial_offset_ns = 0;
        }
        else {
            cc.drift_ppm = cr.uniform(s.other_drift_ppm_lo, s.other_drift_ppm_hi);
            cc.initial_offset_ns =
                s.initial_desync_max_ns > 0 ? cr.uniform_i64(0, s.initial_desync_max_ns) : 0;
        }
        nodes_[i] = std::make_unique<Node>(engine_, static_cast<int>(i), spec.name, kind, cc,
                                           policy, s.seed);
    }

    // Ports, in deterministic link order; slave port faces the parent.
    std::vector<std::vector<int>> port_of_link(n, std::vector<int>(topo_.links.size(), -1));
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const LinkSpec& ls = topo_.links[li];
        port_of_link[ls.a][li] = nodes_[ls.a]->add_port(links_[li].get(), 0, ls.wireless);
        port_of_link[ls.b][li] = nodes_[ls.b]->add_port(links_[li].get(), 1, ls.wireless);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (parent_link[i] >= 0)
            nodes_[i]->set_slave_port(port_of_link[i][parent_link[i]]);

    // Routing for background traffic: next hop toward every destination.
    for (std::size_t src = 0; src < n; ++src) {
        std::vector<int> first_port(n, -1);
        std::vector<bool> vis(n, false);
        std::deque<int> q{static_cast<int>(src)};
        vis[src] = true;
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            for (auto [v, li] : adj[u]) {
                if (vis[v])
                    continue;
                vis[v] = true;
                first_port[v] = u == static_cast<int>(src) ? port_of_link[src][li]
                                                           : first_port[u];
                q.push_back(v);
            }
        }
        for (std::size_t d = 0; d < n; ++d)
            if (d != src && first_port[d] >= 0)
                nodes_[src]->set_next_hop(static_cast<int>(d), first_port[d]);
    }

    // Oscillator random walk, clamped to each class's configured band.
    if (s.random_walk_drift) {
        const std::uint64_t step_ps = static_cast<std::uint64_t>(s.rw_step_s * 1e12);
        const double sdev = s.rw_sigma_ppm_per_sqrt_s * std::sqrt(s.rw_step_s);
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = static_cast<int>(i) == master_ ? s.master_drift_ppm_lo
                                                             : s.other_drift_ppm_lo;
            const double hi = static_cast<int>(i) == master_ ? s.master_drift_ppm_hi
                                                             : s.other_drift_ppm_hi;
            auto rng = std::make_shared<RngStream>(s.seed, "rw/" + topo_.nodes[i].name);
            auto step = std::make_shared<std::function<void()>>();
            Node* node = nodes_[i].get();
            Engine* eng = &engine_;
            *step = [node, eng, rng, step, sdev, lo, hi, step_ps] {
                double d = node->clock().drift_ppm() + sdev * rng->normal();
                d = std::clamp(d, lo, hi);
                node->clock().set_drift_ppm(eng->now(), d);
                eng->after(step_ps, *step);
            };
            engine_.after(step_ps, *step);
        }
    }

    for (std::size_t fi = 0; fi < topo_.flows.size(); ++fi) {
        const FlowSpec& f = topo_.flows[fi];
        Node* src = nodes_[f.src].get();
        const int dst = f.dst;
        load_gens_.push_back(std::make_unique<LoadGenerator>(
            engine_, f.cfg, RngStream(s.seed, "load/" + std::to_string(fi)),
            [src, dst](std::size_t bytes) { src->send_load_frame(dst, bytes); }));
        load_gens_.back()->start();
    }

    for (auto& node : nodes_)
        node->start();
}

void World::sample_now()
{
    const Nanoseconds master_g = nodes_[master_]->global_now();
    SyncSample smp;
    smp.t = engine_.now();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (static_cast<int>(i) == master_)
            continue;
        const Nanoseconds e = std::llabs(nodes_[i]->global_now() - master_g);
        if (e > smp.max_abs_offset_ns) {
            smp.max_abs_offset_ns = e;
            smp.worst_node = static_cast<int>(i);
        }
    }
    samples_.push_back(smp);
}

void World::run(bool collect_samples)
{
    const SimTime end = SimTime::from_seconds(scenario_.duration_s);
    const std::uint64_t sample_step =
        static_cast<std::uint64_t>(1e12 / scenario_.sample_hz);
    SimTime next{0};
    while (next < end) {
        next = SimTime{std::min(end.ps, next.ps + sample_step)};
        engine_.run_until(next);
        if (collect_samples)
            sample_now();
    }

    loss_records_.clear();
    const std::uint64_t interval_ns = scenario_.make_policy().sync_interval_ns;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (static_cast<int>(i) == master_ || !scenario_.sync_enabled)
            continue;
        auto recs = derive_loss_sync(static_cast<int>(i), nodes_[i]->sync_successes(),
                                     interval_ns, end);
        loss_records_.insert(loss_records_.end(), recs.begin(), recs.end());
    }
}

Summary World::summary() const
{
    return summary_after(scenario_.warmup_s);
}

Summary World::summary_after(double warmup_s) const
{
    Summary s = summarize(samples_, SimTime::from_seconds(warmup_s));
    s.loss_sync_proportion = loss_sync_proportion(
        loss_records_, SimTime::from_seconds(scenario_.duration_s), nodes_.size() - 1);
    return s;
}

NodeStats World::aggregate_stats() const
{
    NodeStats total;
    for (const auto& n : nodes_) {
        const NodeStats& st = n->stats();
        total.syncs_sent += st.syncs_sent;
        total.syncs_forwarded += st.syncs_forwarded;
        total.offsets_applied += st.offsets_applied;
        total.rounds_failed += st.rounds_failed;
        total.rounds_skipped_no_delay += st.rounds_skipped_no_delay;
        total.seq_discards += st.seq_discards;
        total.followup_mismatches += st.followup_mismatches;
        total.pdelay_faults += st.pdelay_faults;
        total.pdelay_exchanges += st.pdelay_exchanges;
        total.s1_straddles += st.s1_straddles;
        total.ack_timeouts += st.ack_timeouts;
        total.load_bytes_rx += st.load_bytes_rx;
    }
    return total;
}

Nanoseconds World::current_error(int node_id) const
{
    return nodes_[node_id]->global_now() - nodes_[master_]->global_now();
}

WirelessLink* World::wireless_link(int index)
{
    if (index < 0 || index >= static_cast<int>(wireless_links_.size()))
        return nullptr;
    return wireless_links_[index];
}

std::uint64_t World::wired_drops() const
{
    std::uint64_t total = 0;
    for (const auto& l : links_)
        if (auto* w = dynamic_cast<const WiredLink*>(l.get()))
            total += w->dropped();
    return total;
}

} // namespace tsnsim
