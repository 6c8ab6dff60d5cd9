//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tsnsim {

const char* to_string(MasterPlacement m)
{
    switch (m) {
        case MasterPlacement::TSN: return "tsn";
        case MasterPlacement::GNB: return "gnb";
        case MasterPlacement::UE: return "ue";
    }
    return "?";
}

SyncPolicy Scenario::make_policy() const
{
    SyncPolicy p;
    p.sync_enabled = sync_enabled;
    p.sync_interval_ns = static_cast<std::uint64_t>(std::llround(sync_interval_s * 1e9));
    p.pdelay_interval_ns = static_cast<std::uint64_t>(std::llround(pdelay_interval_s * 1e9));
    p.harq_gated_followup = harq_gated_followup;
    p.mobility_fix = mobility_fix;
    p.binding_on_wireless = binding_on_wireless;
    p.s1_compensation = s1_compensation;
    p.resp_processing_wired_ps =
        static_cast<std::uint64_t>(std::llround(resp_processing_wired_ms * 1e9));
    p.resp_processing_wireless_ps =
        static_cast<std::uint64_t>(std::llround(resp_processing_wireless_ms * 1e9));
    return p;
}

WirelessLinkConfig Scenario::make_wireless_config() const
{
    WirelessLinkConfig w;
    w.target_bler = target_bler;
    w.harq_max_retx = harq_max_retx;
    w.harq_rtt_ps = static_cast<std::uint64_t>(std::llround(harq_rtt_us * 1e6));
    w.base_latency_ps = static_cast<std::uint64_t>(std::llround(wireless_base_latency_us * 1e6));
    return w;
}

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt_u64(std::uint64_t v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return buf;
}

const char* to_string(TopologyKind t)
{
    switch (t) {
        case TopologyKind::Baseline: return "baseline";
        case TopologyKind::Chain: return "chain";
        case TopologyKind::Factory: return "factory";
    }
    return "?";
}

const char* to_string(UeMotion m)
{
    switch (m) {
        case UeMotion::Stationary: return "stationary";
        case UeMotion::Recede: return "recede";
        case UeMotion::Patrol: return "patrol";
    }
    return "?";
}

} // namespace

std::vector<std::pair<std::string, std::string>> Scenario::resolved_items() const
{
    std::vector<std::pair<std::string, std::string>> v;
    auto add = [&](const char* k, std::string val) { v.emplace_back(k, std::move(val)); };
    add("name", name);
    add("topology", to_string(topology));
    add("master", tsnsim::to_string(master));
    add("duration_s", fmt_double(duration_s));
    add("seed", fmt_u64(seed));
    add("clock_frequency_hz", fmt_u64(clock_frequency_hz));
    add("master_drift_ppm_lo", fmt_double(master_drift_ppm_lo));
    add("master_drift_ppm_hi", fmt_double(master_drift_ppm_hi));
    add("other_drift_ppm_lo", fmt_double(other_drift_ppm_lo));
    add("other_drift_ppm_hi", fmt_double(other_drift_ppm_hi));
    add("counter_mode", counter_mode == CounterMode::DualCounter ? "dual" : "single");
    add("timestamp_jitter_ns", fmt_u64(static_cast<std::uint64_t>(timestamp_jitter_ns)));
    add("initial_desync_max_ns", fmt_u64(static_cast<std::uint64_t>(initial_desync_max_ns)));
    add("random_walk_drift", random_walk_drift ? "on" : "off");
    add("rw_sigma_ppm_per_sqrt_s", fmt_double(rw_sigma_ppm_per_sqrt_s));
    add("sync_enabled", sync_enabled ? "on" : "off");
    add("sync_interval_s", fmt_double(sync_interval_s));
    add("pdelay_interval_s", fmt_double(pdelay_interval_s));
    add("harq_gated_followup", harq_gated_followup ? "on" : "off");
    add("binding_on_wireless", binding_on_wireless ? "on" : "off");
    add("s1_compensation", s1_compensation ? "on" : "off");
    add("mobility_fix", mobility_fix == PeerDelayMode::DirectAfterConvergence ? "direct"
                                                                              : "standard");
    add("resp_processing_wired_ms", fmt_double(resp_processing_wired_ms));
    add("resp_processing_wireless_ms", fmt_double(resp_processing_wireless_ms));
    add("bandwidth_tsn_bps", fmt_u64(tsn_bandwidth_bps));
    add("bandwidth_core_bps", fmt_u64(core_bandwidth_bps));
    add("wired_propagation_ns", fmt_u64(wired_propagation_ns));
    add("wired_queue_bytes", fmt_u64(wired_queue_bytes));
    add("target_bler", fmt_double(target_bler));
    add("harq_max_retx", fmt_u64(static_cast<std::uint64_t>(harq_max_retx)));
    add("harq_rtt_us", fmt_double(harq_rtt_us));
    add("wireless_base_latency_us", fmt_double(wireless_base_latency_us));
    add("gnb_antenna_height_m", fmt_double(gnb_antenna_height_m));
    add("ue_antenna_height_m", fmt_double(ue_antenna_height_m));
    add("ue_motion", to_string(ue_motion));
    add("ue_speed_mps", fmt_double(ue_speed_mps));
    add("patrol_width_m", fmt_double(patrol_width_m));
    add("patrol_height_m", fmt_double(patrol_height_m));
    add("patrol_start_frac", fmt_double(patrol_start_frac));
    add("motion_hold_s", fmt_double(motion_hold_s));
    add("chain_hops", fmt_u64(static_cast<std::uint64_t>(chain_hops)));
    add("chain_load_taps", chain_load_taps ? "on" : "off");
    add("factory_grid", fmt_u64(static_cast<std::uint64_t>(factory_grid)));
    add("factory_cell_m", fmt_double(factory_cell_m));
    add("factory_speed_lo_mps", fmt_double(factory_speed_lo_mps));
    add("factory_speed_hi_mps", fmt_double(factory_speed_hi_mps));
    add("factory_periodic_bps", fmt_u64(factory_periodic_bps));
    add("factory_burst_hi_bps", fmt_u64(factory_burst_hi_bps));
    add("load_rate_bps", fmt_u64(load_rate_bps));
    add("load_pattern", load_pattern == LoadPattern::Periodic ? "periodic" : "burst");
    add("load_frame_bytes", fmt_u64(load_frame_bytes));
    add("load_burst_factor", fmt_double(load_burst_factor));
    add("load_burst_epoch_ms", fmt_double(load_burst_epoch_ms));
    add("sample_hz", fmt_double(sample_hz));
    add("warmup_s", fmt_double(warmup_s));
    return v;
}

Scenario make_preset(const std::string& name)
{
    Scenario s;
    s.name = name;
    if (name == "baseline-tsn-master") {
        s.timestamp_jitter_ns = 120;
        return s;
    }
    if (name == "collision-single-counter" || name == "collision-dual-counter") {
        s.topology = TopologyKind::Chain;
        s.chain_hops = 22;
        s.counter_mode = name == "collision-single-counter" ? CounterMode::SingleCounter
                                                            : CounterMode::DualCounter;
        s.timestamp_jitter_ns = 120;
        s.duration_s = 200;
        return s;
    }
    if (name == "harq-ungated" || name == "harq-gated") {
        s.harq_gated_followup = name == "harq-gated";
        s.target_bler = 0.01; // desk acceleration of the retransmission path
        s.timestamp_jitter_ns = 120;
        s.duration_s = 200;
        s.master = MasterPlacement::GNB;
        return s;
    }
    if (name == "mobility-uniform-10ms") {
        s.master = MasterPlacement::GNB;
        s.ue_motion = UeMotion::Recede;
        s.ue_speed_mps = 10.0;
        s.binding_on_wireless = false;
        s.duration_s = 60;
        s.warmup_s = 12;
        return s;
    }
    if (name == "sync-interval-sweep") {
        s.random_walk_drift = true;
        s.duration_s = 60;
        return s;
    }
    if (name == "diameter-sweep") {
        s.topology = TopologyKind::Chain;
        s.chain_hops = 20;
        s.duration_s = 60;
        return s;
    }
    if (name == "speed-sweep") {
        s.master = MasterPlacement::GNB;
        s.ue_motion = UeMotion::Patrol;
        s.binding_on_wireless = false;
        s.ue_speed_mps = 27.78; // 100 km/h
        s.duration_s = 75;
        s.warmup_s = 15;
        return s;
    }
    if (name == "load-sweep") {
        s.topology = TopologyKind::Chain;
        s.chain_hops = 5;
        s.chain_load_taps = true;
        s.random_walk_drift = true;
        s.load_rate_bps = 400'000'000;
        s.load_pattern = LoadPattern::RandomBurst;
        s.duration_s = 60;
        return s;
    }
    if (name == "factory") {
        s.topology = TopologyKind::Factory;
        s.timestamp_jitter_ns = 120;
        s.duration_s = 100;
        return s;
    }
    if (name == "no-sync-control") {
        s.sync_enabled = false;
        s.duration_s = 30;
        s.warmup_s = 0;
        return s;
    }
    throw ConfigError("unknown preset: " + name);
}

std::vector<std::string> preset_names()
{
    return {"baseline-tsn-master", "collision-single-counter", "collision-dual-counter",
            "harq-ungated",        "harq-gated",               "mobility-uniform-10ms",
            "sync-interval-sweep", "diameter-sweep",           "speed-sweep",
            "load-sweep",          "factory",                  "no-sync-control"};
}

namespace {

bool parse_bool(const std::string& v, const std::string& where)
{
    if (v == "on" || v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "off" || v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(where + ": expected boolean, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& where)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    }
    catch (const std::exception&) {
        throw ConfigError(where + ": expected number, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& where)
{
    const double d = parse_double(v, where);
    if (d < 0)
        throw ConfigError(where + ": expected non-negative value, got '" + v + "'");
    return static_cast<std::uint64_t>(std::llround(d));
}

} // namespace

void apply_key(Scenario& s, const std::string& key, const std::string& value,
               const std::string& where)
{
    if (key == "name") { s.name = value; return; }
    if (key == "preset") { const auto seed = s.seed; s = make_preset(value); s.seed = seed; return; }
    if (key == "topology") {
        if (value == "baseline") s.topology = TopologyKind::Baseline;
        else if (value == "chain") s.topology = TopologyKind::Chain;
        else if (value == "factory") s.topology = TopologyKind::Factory;
        else throw ConfigError(where + ": unknown topology '" + value + "'");
        return;
    }
    if (key == "master") {
        if (value == "tsn") s.master = MasterPlacement::TSN;
        else if (value == "gnb") s.master = MasterPlacement::GNB;
        else if (value == "ue") s.master = MasterPlacement::UE;
        else throw ConfigError(where + ": unknown master placement '" + value + "'");
        return;
    }
    if (key == "counter_mode") {
        if (value == "dual") s.counter_mode = CounterMode::DualCounter;
        else if (value == "single") s.counter_mode = CounterMode::SingleCounter;
        else throw ConfigError(where + ": counter_mode must be dual or single");
        return;
    }
    if (key == "mobility_fix") {
        if (value == "standard") s.mobility_fix = PeerDelayMode::Standard;
        else if (value == "direct") s.mobility_fix = PeerDelayMode::DirectAfterConvergence;
        else throw ConfigError(where + ": mobility_fix must be standard or direct");
        return;
    }
    if (key == "ue_motion") {
        if (value == "stationary") s.ue_motion = UeMotion::Stationary;
        else if (value == "recede") s.ue_motion = UeMotion::Recede;
        else if (value == "patrol") s.ue_motion = UeMotion::Patrol;
        else throw ConfigError(where + ": unknown ue_motion '" + value + "'");
        return;
    }
    if (key == "load_pattern") {
        if (value == "periodic") s.load_pattern = LoadPattern::Periodic;
        else if (value == "burst") s.load_pattern = LoadPattern::RandomBurst;
        else throw ConfigError(where + ": load_pattern must be periodic or burst");
        return;
    }

    if (key == "duration_s") { s.duration_s = parse_double(value, where); return; }
    if (key == "seed") { s.seed = parse_u64(value, where); return; }
    if (key == "clock_frequency_hz") { s.clock_frequency_hz = parse_u64(value, where); return; }
    if (key == "master_drift_ppm_lo") { s.master_drift_ppm_lo = parse_double(value, where); return; }
    if (key == "master_drift_ppm_hi") { s.master_drift_ppm_hi = parse_double(value, where); return; }
    if (key == "other_drift_ppm_lo") { s.other_drift_ppm_lo = parse_double(value, where); return; }
    if (key == "other_drift_ppm_hi") { s.other_drift_ppm_hi = parse_double(value, where); return; }
    if (key == "timestamp_jitter_ns") { s.timestamp_jitter_ns = static_cast<Nanoseconds>(parse_u64(value, where)); return; }
    if (key == "initial_desync_max_ns") { s.initial_desync_max_ns = static_cast<Nanoseconds>(parse_u64(value, where)); return; }
    if (key == "random_walk_drift") { s.random_walk_drift = parse_bool(value, where); return; }
    if (key == "rw_sigma_ppm_per_sqrt_s") { s.rw_sigma_ppm_per_sqrt_s = parse_double(value, where); return; }
    if (key == "rw_step_s") { s.rw_step_s = parse_double(value, where); return; }
    if (key == "sync_enabled") { s.sync_enabled = parse_bool(value, where); return; }
    if (key == "sync_interval_s") { s.sync_interval_s = parse_double(value, where); return; }
    if (key == "pdelay_interval_s") { s.pdelay_interval_s = parse_double(value, where); return; }
    if (key == "harq_gated_followup") { s.harq_gated_followup = parse_bool(value, where); return; }
    if (key == "binding_on_wireless") { s.binding_on_wireless = parse_bool(value, where); return; }
    if (key == "s1_compensation") { s.s1_compensation = parse_bool(value, where); return; }
    if (key == "resp_processing_wired_ms") { s.resp_processing_wired_ms = parse_double(value, where); return; }
    if (key == "resp_processing_wireless_ms") { s.resp_processing_wireless_ms = parse_double(value, where); return; }
    if (key == "bandwidth_tsn_bps") { s.tsn_bandwidth_bps = parse_u64(value, where); return; }
    if (key == "bandwidth_core_bps") { s.core_bandwidth_bps = parse_u64(value, where); return; }
    if (key == "wired_propagation_ns") { s.wired_propagation_ns = parse_u64(value, where); return; }
    if (key == "wired_queue_bytes") { s.wired_queue_bytes = parse_u64(value, where); return; }
    if (key == "target_bler") { s.target_bler = parse_double(value, where); return; }
    if (key == "harq_max_retx") { s.harq_max_retx = static_cast<int>(parse_u64(value, where)); return; }
    if (key == "harq_rtt_us") { s.harq_rtt_us = parse_double(value, where); return; }
    if (key == "wireless_base_latency_us") { s.wireless_base_latency_us = parse_double(value, where); return; }
    if (key == "gnb_antenna_height_m") { s.gnb_antenna_height_m = parse_double(value, where); return; }
    if (key == "ue_antenna_height_m") { s.ue_antenna_height_m = parse_double(value, where); return; }
    if (key == "ue_speed_mps") { s.ue_speed_mps = parse_double(value, where); return; }
    if (key == "ue_speed_kmh") { s.ue_speed_mps = parse_double(value, where) / 3.6; return; }
    if (key == "patrol_width_m") { s.patrol_width_m = parse_double(value, where); return; }
    if (key == "patrol_height_m") { s.patrol_height_m = parse_double(value, where); return; }
    if (key == "patrol_start_frac") { s.patrol_start_frac = parse_double(value, where); return; }
    if (key == "motion_hold_s") { s.motion_hold_s = parse_double(value, where); return; }
    if (key == "chain_hops") { s.chain_hops = static_cast<int>(parse_u64(value, where)); return; }
    if (key == "chain_load_taps") { s.chain_load_taps = parse_bool(value, where); return; }
    if (key == "factory_grid") { s.factory_grid = static_cast<int>(parse_u64(value, where)); return; }
    if (key == "factory_cell_m") { s.factory_cell_m = parse_double(value, where); return; }
    if (key == "factory_speed_lo_mps") { s.factory_speed_lo_mps = parse_double(value, where); return; }
    if (key == "factory_speed_hi_mps") { s.factory_speed_hi_mps = parse_double(value, where); return; }
    if (key == "factory_periodic_bps") { s.factory_periodic_bps = parse_u64(value, where); return; }
    if (key == "factory_burst_hi_bps") { s.factory_burst_hi_bps = parse_u64(value, where); return; }
    if (key == "load_rate_bps") { s.load_rate_bps = parse_u64(value, where); return; }
    if (key == "load_rate_mbps") { s.load_rate_bps = parse_u64(value, where) * 1'000'000ull; return; }
    if (key == "load_frame_bytes") { s.load_frame_bytes = parse_u64(value, where); return; }
    if (key == "load_burst_factor") { s.load_burst_factor = parse_double(value, where); return; }
    if (key == "load_burst_epoch_ms") { s.load_burst_epoch_ms = parse_double(value, where); return; }
    if (key == "sample_hz") { s.sample_hz = parse_double(value, where); return; }
    if (key == "warmup_s") { s.warmup_s = parse_double(value, where); return; }

    throw ConfigError(where + ": unknown key '" + key + "'");
}

Scenario scenario_from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    Scenario s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line.erase(hash);
        auto trim = [](std::string& t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            t = b == std::string::npos ? std::string{} : t.substr(b, e - b + 1);
        };
        trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
            continue; // sections are organizational only
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        trim(key);
        trim(value);
        apply_key(s, key, value, path + ":" + std::to_string(lineno));
    }
    return s;
}

} // namespace tsnsim
