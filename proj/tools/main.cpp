//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/run.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace tsnsim;

namespace {

std::vector<std::uint64_t> parse_seed_range(const std::string& spec)
{
    const auto dots = spec.find("..");
    if (dots == std::string::npos)
        throw ConfigError("--seeds expects a..b, got '" + spec + "'");
    const std::uint64_t a = std::stoull(spec.substr(0, dots));
    const std::uint64_t b = std::stoull(spec.substr(dots + 2));
    if (b < a)
        throw ConfigError("--seeds range is empty: " + spec);
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = a; v <= b; ++v)
        out.push_back(v);
    return out;
}

std::vector<std::string> split_csv(const std::string& s)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tsnsim: time-synchronization simulator for integrated TSN + 5G networks"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute a scenario, a sweep, or a preset");
    std::string preset, scenario_file, master, counter_mode, harq_gate, mobility_fix, sweep;
    std::string out_dir = "out";
    std::string seeds_range;
    std::uint64_t seed = 1;
    double duration = -1;
    int parallel = 1;
    run->add_option("--preset", preset, "preset scenario name");
    run->add_option("--scenario", scenario_file, "scenario file (key = value)");
    run->add_option("--seed", seed, "RNG seed");
    run->add_option("--seeds", seeds_range, "seed range a..b");
    run->add_option("--duration", duration, "simulated seconds");
    run->add_option("--master", master, "master placement: tsn|gnb|ue");
    run->add_option("--counter-mode", counter_mode, "dual|single");
    run->add_option("--harq-gate", harq_gate, "on|off");
    run->add_option("--mobility-fix", mobility_fix, "on|off (direct peer delay)");
    run->add_option("--sweep", sweep, "key=v1,v2,... parameter sweep");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--parallel", parallel, "concurrent instances for sweeps");

    auto* presets = app.add_subcommand("presets", "list preset scenarios");

    CLI11_PARSE(app, argc, argv);

    if (presets->parsed()) {
        for (const auto& p : preset_names())
            std::cout << p << "\n";
        return 0;
    }

    try {
        RunManifest m;
        if (!preset.empty() && !scenario_file.empty())
            throw ConfigError("--preset and --scenario are mutually exclusive");
        if (!preset.empty())
            m.base = make_preset(preset);
        else if (!scenario_file.empty())
            m.base = scenario_from_file(scenario_file);
        else
            throw ConfigError("one of --preset or --scenario is required");

        if (!master.empty())
            apply_key(m.base, "master", master, "--master");
        if (!counter_mode.empty())
            apply_key(m.base, "counter_mode", counter_mode, "--counter-mode");
        if (!harq_gate.empty())
            apply_key(m.base, "harq_gated_followup", harq_gate, "--harq-gate");
        if (!mobility_fix.empty()) {
            if (mobility_fix == "on")
                apply_key(m.base, "mobility_fix", "direct", "--mobility-fix");
            else if (mobility_fix == "off")
                apply_key(m.base, "mobility_fix", "standard", "--mobility-fix");
            else
                throw ConfigError("--mobility-fix expects on|off");
        }
        if (duration > 0)
            apply_key(m.base, "duration_s", std::to_string(duration), "--duration");

        m.seeds = seeds_range.empty() ? std::vector<std::uint64_t>{seed}
                                      : parse_seed_range(seeds_range);
        if (!sweep.empty()) {
            const auto eq = sweep.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--sweep expects key=v1,v2,...");
            m.sweep_key = sweep.substr(0, eq);
            m.sweep_values = split_csv(sweep.substr(eq + 1));
            if (m.sweep_values.empty())
                throw ConfigError("--sweep has no values");
        }
        m.out_dir = out_dir;
        m.parallel = parallel;

        execute_manifest(m, std::cout);
        return 0;
    }
    catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
