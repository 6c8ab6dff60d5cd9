//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/channel.hpp"
#include "tsnsim/clock.hpp"
#include "tsnsim/mobility.hpp"
#include "tsnsim/node.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tsnsim {

enum class MasterPlacement { TSN, GNB, UE };
enum class TopologyKind { Baseline, Chain, Factory };
enum class UeMotion { Stationary, Recede, Patrol };

/// Invalid configuration (CLI exit code 2, as opposed to runtime invariant
/// violations which exit 3).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const char* to_string(MasterPlacement m);

/// Fully resolved run configuration. Every field has the Table-II-style
/// default; presets and the scenario file override from here.
struct Scenario {
    std::string name = "baseline";
    TopologyKind topology = TopologyKind::Baseline;
    MasterPlacement master = MasterPlacement::TSN;
    double duration_s = 100.0;
    std::uint64_t seed = 1;

    // clock
    std::uint64_t clock_frequency_hz = 200'000'000;
    double master_drift_ppm_lo = -5.0;
    double master_drift_ppm_hi = 5.0;
    double other_drift_ppm_lo = -10.0;
    double other_drift_ppm_hi = 10.0;
    CounterMode counter_mode = CounterMode::DualCounter;
    Nanoseconds timestamp_jitter_ns = 0;
    Nanoseconds initial_desync_max_ns = 1'000'000;
    bool random_walk_drift = false;
    double rw_sigma_ppm_per_sqrt_s = 0.5;
    double rw_step_s = 0.1;

    // synchronization
    bool sync_enabled = true;
    double sync_interval_s = 0.125;
    double pdelay_interval_s = 1.0;
    bool harq_gated_followup = true;
    bool binding_on_wireless = true;
    bool s1_compensation = false;
    PeerDelayMode mobility_fix = PeerDelayMode::Standard;
    double resp_processing_wired_ms = 8.0;
    double resp_processing_wireless_ms = 1.0;

    // wired channel
    std::uint64_t tsn_bandwidth_bps = 1'000'000'000;
    std::uint64_t core_bandwidth_bps = 10'000'000'000ull;
    std::uint64_t wired_propagation_ns = 50;
    std::size_t wired_queue_bytes = 262'144;

    // wireless channel
    double target_bler = 1e-6; // Table II: 0.0001 %
    int harq_max_retx = 4;
    double harq_rtt_us = 500.0;
    double wireless_base_latency_us = 200.0;
    double gnb_antenna_height_m = 25.0;
    double ue_antenna_height_m = 1.5;

    // mobility
    UeMotion ue_motion = UeMotion::Patrol;
    double ue_speed_mps = 10.0;
    double patrol_width_m = 50.0;
    double patrol_height_m = 50.0;
    double patrol_start_frac = -1.0; // <0: pick the mid-range-distance point
    double motion_hold_s = 10.0;     // stationary bootstrap window

    // chain topology
    int chain_hops = 5;
    bool chain_load_taps = false; // extra endpoints injecting load across the chain

    // factory topology
    int factory_grid = 5; // grid x grid work cells, 50 m pitch
    double factory_cell_m = 25.0;
    double factory_speed_lo_mps = 5.0;
    double factory_speed_hi_mps = 10.0;
    std::uint64_t factory_periodic_bps = 100'000'000;
    std::uint64_t factory_burst_hi_bps = 200'000'000;

    // background load
    std::uint64_t load_rate_bps = 0;
    LoadPattern load_pattern = LoadPattern::Periodic;
    std::size_t load_frame_bytes = 1500;
    double load_burst_factor = 2.0; // RandomBurst draws from [0, factor*rate]
    double load_burst_epoch_ms = 50.0;

    // metrics
    double sample_hz = 1000.0;
    double warmup_s = 5.0;

    SyncPolicy make_policy() const;
    WirelessLinkConfig make_wireless_config() const;

    /// Resolved key=value view, embedded in every output for reproducibility.
    std::vector<std::pair<std::string, std::string>> resolved_items() const;
};

/// Named presets covering the experiment matrix; master placement and other
/// flags may still be overridden afterwards.
Scenario make_preset(const std::string& name);
std::vector<std::string> preset_names();

/// key = value (with [section] headers) scenario-file support.
Scenario scenario_from_file(const std::string& path);
void apply_key(Scenario& s, const std::string& key, const std::string& value,
               const std::string& where);

} // namespace tsnsim
