//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/scenario.hpp"
#include "tsnsim/world.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tsnsim {

struct RunManifest {
    Scenario base;
    std::vector<std::uint64_t> seeds{1};
    std::string sweep_key;
    std::vector<std::string> sweep_values;
    std::string out_dir = "out";
    int parallel = 1;
};

struct RunResult {
    Scenario scenario;
    Summary summary;
    NodeStats stats;
    std::uint64_t trace_hash = 0;
    std::string csv_path;
    std::string summary_path;
    std::string loss_path;
};

/// Executes one scenario and writes run CSV, loss-sync CSV, and summary.
/// Output bytes are a pure function of (scenario, seed).
RunResult run_and_write(const Scenario& s, const std::string& out_dir);

/// Executes a whole manifest: seeds x sweep values, optionally in parallel
/// (instances are independent single-threaded simulations). Sweep results
/// are merged into a wide table keyed by the swept value.
std::vector<RunResult> execute_manifest(const RunManifest& m, std::ostream& log);

std::string run_basename(const Scenario& s);

} // namespace tsnsim
