//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/metrics.hpp"
#include "tsnsim/engine.hpp"

#include <cmath>
#include <cstdlib>

namespace tsnsim {

Summary summarize(const std::vector<SyncSample>& samples, SimTime warmup_cut)
{
    double sum = 0;
    double sumsq = 0;
    Nanoseconds max = 0;
    std::size_t n = 0;
    for (const auto& s : samples) {
        if (s.t < warmup_cut)
            continue;
        const double v = static_cast<double>(s.max_abs_offset_ns);
        sum += v;
        sumsq += v * v;
        if (s.max_abs_offset_ns > max)
            max = s.max_abs_offset_ns;
        ++n;
    }
    if (n == 0)
        throw SimulationError("summarize: no samples after warm-up cut");
    Summary out;
    out.sample_count = n;
    out.mean_ns = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - out.mean_ns * out.mean_ns;
    out.stddev_ns = var > 0 ? std::sqrt(var) : 0.0;
    out.max_ns = max;
    return out;
}

std::vector<LossSyncRecord> derive_loss_sync(int node_id,
                                             const std::vector<SimTime>& successes,
                                             std::uint64_t sync_interval_ns, SimTime run_end)
{
    std::vector<LossSyncRecord> out;
    if (successes.empty())
        return out;
    const std::uint64_t limit_ps = 3ull * sync_interval_ns * 1000ull;
    SimTime last = successes.front();
    for (std::size_t i = 1; i < successes.size(); ++i) {
        if (successes[i].ps - last.ps > limit_ps)
            out.push_back({node_id, SimTime{last.ps + limit_ps}, successes[i]});
        last = successes[i];
    }
    if (run_end.ps > last.ps + limit_ps)
        out.push_back({node_id, SimTime{last.ps + limit_ps}, run_end});
    return out;
}

double loss_sync_proportion(const std::vector<LossSyncRecord>& records, SimTime duration,
                            std::size_t node_count)
{
    if (duration.ps == 0 || node_count == 0)
        return 0.0;
    std::uint64_t total = 0;
    for (const auto& r : records)
        total += r.interval_end.ps - r.interval_start.ps;
    return static_cast<double>(total) /
           (static_cast<double>(duration.ps) * static_cast<double>(node_count));
}

} // namespace tsnsim
