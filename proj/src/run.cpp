//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>

namespace tsnsim {

namespace {

std::string sanitize(std::string v)
{
    for (char& c : v)
        if (c == '/' || c == ' ')
            c = '_';
    return v;
}

void write_header(std::ofstream& out, const Scenario& s)
{
    for (const auto& [k, v] : s.resolved_items())
        out << "# " << k << " = " << v << "\n";
}

} // namespace

std::string run_basename(const Scenario& s)
{
    return sanitize(s.name) + "-seed" + std::to_string(s.seed);
}

RunResult run_and_write(const Scenario& s, const std::string& out_dir)
{
    std::filesystem::create_directories(out_dir);
    World world(s);
    world.run();

    RunResult r;
    r.scenario = s;
    r.summary = world.summary();
    r.stats = world.aggregate_stats();
    r.trace_hash = world.trace_hash();

    const std::string base = out_dir + "/" + run_basename(s);
    r.csv_path = base + ".csv";
    r.loss_path = base + "-loss.csv";
    r.summary_path = base + "-summary.txt";

    {
        std::ofstream out(r.csv_path, std::ios::binary);
        write_header(out, s);
        out << "t_s,max_offset_ns,worst_node\n";
        char line[128];
        for (const auto& smp : world.samples()) {
            std::snprintf(line, sizeof line, "%s,%lld,%s\n", format_seconds(smp.t).c_str(),
                          static_cast<long long>(smp.max_abs_offset_ns),
                          smp.worst_node >= 0 ? world.node(smp.worst_node).name().c_str() : "-");
            out << line;
        }
    }
    {
        std::ofstream out(r.loss_path, std::ios::binary);
        write_header(out, s);
        out << "node,interval_start_s,interval_end_s\n";
        for (const auto& rec : world.loss_records())
            out << world.node(rec.node_id).name() << "," << format_seconds(rec.interval_start)
                << "," << format_seconds(rec.interval_end) << "\n";
    }
    {
        std::ofstream out(r.summary_path, std::ios::binary);
        write_header(out, s);
        char buf[160];
        std::snprintf(buf, sizeof buf, "mean_ns = %.3f\n", r.summary.mean_ns);
        out << buf;
        std::snprintf(buf, sizeof buf, "stddev_ns = %.3f\n", r.summary.stddev_ns);
        out << buf;
        out << "max_ns = " << r.summary.max_ns << "\n";
        std::snprintf(buf, sizeof buf, "loss_sync_proportion = %.6f\n",
                      r.summary.loss_sync_proportion);
        out << buf;
        out << "samples = " << r.summary.sample_count << "\n";
        out << "offsets_applied = " << r.stats.offsets_applied << "\n";
        out << "rounds_failed = " << r.stats.rounds_failed << "\n";
        out << "rounds_skipped_no_delay = " << r.stats.rounds_skipped_no_delay << "\n";
        out << "seq_discards = " << r.stats.seq_discards << "\n";
        out << "followup_mismatches = " << r.stats.followup_mismatches << "\n";
        out << "pdelay_exchanges = " << r.stats.pdelay_exchanges << "\n";
        out << "pdelay_faults = " << r.stats.pdelay_faults << "\n";
        out << "s1_straddles = " << r.stats.s1_straddles << "\n";
        out << "ack_timeouts = " << r.stats.ack_timeouts << "\n";
        out << "wired_drops = " << world.wired_drops() << "\n";
        char hash[32];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(r.trace_hash));
        out << "trace_hash = " << hash << "\n";
    }
    return r;
}

std::vector<RunResult> execute_manifest(const RunManifest& m, std::ostream& log)
{
    std::vector<Scenario> jobs;
    if (m.sweep_key.empty()) {
        for (auto seed : m.seeds) {
            Scenario s = m.base;
            s.seed = seed;
            jobs.push_back(s);
        }
    }
    else {
        for (const auto& value : m.sweep_values) {
            for (auto seed : m.seeds) {
                Scenario s = m.base;
                apply_key(s, m.sweep_key, value, "--sweep");
                s.name = m.base.name + "-" + sanitize(m.sweep_key) + "=" + sanitize(value);
                s.seed = seed;
                jobs.push_back(s);
            }
        }
    }

    std::vector<RunResult> results(jobs.size());
    const int workers = std::max(1, m.parallel);
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            results[i] = run_and_write(jobs[i], m.out_dir);
    }
    else {
        std::vector<std::future<RunResult>> futs(jobs.size());
        std::size_t next = 0;
        while (next < jobs.size()) {
            const std::size_t batch = std::min<std::size_t>(workers, jobs.size() - next);
            for (std::size_t k = 0; k < batch; ++k)
                futs[next + k] = std::async(std::launch::async, run_and_write, jobs[next + k],
                                            m.out_dir);
            for (std::size_t k = 0; k < batch; ++k)
                results[next + k] = futs[next + k].get();
            next += batch;
        }
    }

    for (const auto& r : results) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "%-48s seed=%llu mean=%.3fus stddev=%.3fus max=%.3fus loss_sync=%.6f\n",
                      r.scenario.name.c_str(),
                      static_cast<unsigned long long>(r.scenario.seed),
                      r.summary.mean_ns / 1000.0, r.summary.stddev_ns / 1000.0,
                      static_cast<double>(r.summary.max_ns) / 1000.0,
                      r.summary.loss_sync_proportion);
        log << buf;
    }

    if (!m.sweep_key.empty()) {
        std::filesystem::create_directories(m.out_dir);
        std::ofstream out(m.out_dir + "/" + sanitize(m.base.name) + "-sweep.csv",
                          std::ios::binary);
        out << m.sweep_key << ",seed,mean_ns,stddev_ns,max_ns,loss_sync_proportion\n";
        std::size_t idx = 0;
        for (const auto& value : m.sweep_values) {
            for (auto seed : m.seeds) {
                const auto& r = results[idx++];
                char buf[200];
                std::snprintf(buf, sizeof buf, "%s,%llu,%.3f,%.3f,%lld,%.6f\n", value.c_str(),
                              static_cast<unsigned long long>(seed), r.summary.mean_ns,
                              r.summary.stddev_ns, static_cast<long long>(r.summary.max_ns),
                              r.summary.loss_sync_proportion);
                out << buf;
            }
        }
    }
    return results;
}

} // namespace tsnsim
