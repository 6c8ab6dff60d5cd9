//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/time.hpp"

#include <string>
#include <vector>

namespace tsnsim {

struct SyncSample {
    SimTime t;
    Nanoseconds max_abs_offset_ns = 0;
    int worst_node = -1;
};

struct LossSyncRecord {
    int node_id = -1;
    SimTime interval_start;
    SimTime interval_end;
};

struct Summary {
    double mean_ns = 0;
    double stddev_ns = 0;
    Nanoseconds max_ns = 0;
    double loss_sync_proportion = 0;
    std::size_t sample_count = 0;
};

/// Population statistics over samples taken after the warm-up cut.
/// Loss-sync is filled in by the caller (it is a full-run figure; warm-up
/// never hides those records). Throws on an empty post-warm-up set.
Summary summarize(const std::vector<SyncSample>& samples, SimTime warmup_cut);

/// Derives loss-sync intervals from a node's offset-application log: an
/// interval opens when three consecutive sync intervals pass with no
/// successful application, and only after the node has synchronized once.
std::vector<LossSyncRecord> derive_loss_sync(int node_id,
                                             const std::vector<SimTime>& successes,
                                             std::uint64_t sync_interval_ns, SimTime run_end);

/// Fraction of node-time spent inside loss-sync intervals.
double loss_sync_proportion(const std::vector<LossSyncRecord>& records, SimTime duration,
                            std::size_t node_count);

} // namespace tsnsim
