//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/ptp.hpp"
#include "tsnsim/rng.hpp"

#include <cmath>
#include <cstdint>

namespace tsnsim::testing {

/// A randomly generated, internally consistent timestamp ledger with known
/// ground truth. Timestamps are constructed directly from ideal clock
/// functions (true time scaled by drift, floor-quantized to the tick), i.e.
/// independently of the simulator's clock or node code paths.
struct Ledger {
    // ground truth
    double master_drift_ppm = 0;
    double slave_drift_ppm = 0;
    double true_ratio = 1.0;     // f_master / f_slave
    double link_delay_ns = 0;    // one-way, true time
    double residence_ns = 0;     // transparent-clock residence, true time
    double upstream_delay_ns = 0;// master->TC link, true time
    Nanoseconds slave_phase_ns = 0;
    Nanoseconds slave_global_ns = 0;

    // pdelay exchange (requester = slave, responder = master side)
    PdelayTimestamps pd;
    Nanoseconds expected_delay_master_units = 0;

    // sync exchange over master -> TC -> slave
    SyncTimestamps sync;
    Nanoseconds expected_offset = 0; // true offset at Sync receipt

    static constexpr Nanoseconds kTick = 5;

    static Nanoseconds quant(double ns) { return static_cast<Nanoseconds>(std::floor(ns / kTick)) * kTick; }

    double master_time(double tau) const { return tau * (1.0 + master_drift_ppm * 1e-6); }
    double slave_local(double tau) const
    {
        return tau * (1.0 + slave_drift_ppm * 1e-6) + static_cast<double>(slave_phase_ns);
    }
    double slave_global(double tau) const
    {
        return slave_local(tau) + static_cast<double>(slave_global_ns);
    }
};

inline Ledger make_ledger(RngStream& rng)
{
    Ledger l;
    l.master_drift_ppm = rng.uniform(-5.0, 5.0);
    l.slave_drift_ppm = rng.uniform(-10.0, 10.0);
    l.true_ratio = (1.0 + l.master_drift_ppm * 1e-6) / (1.0 + l.slave_drift_ppm * 1e-6);
    l.link_delay_ns = rng.uniform(5'000.0, 50'000.0);
    l.upstream_delay_ns = rng.uniform(50.0, 50'000.0);
    l.residence_ns = rng.uniform(0.0, 1'000'000.0);
    l.slave_phase_ns = rng.uniform_i64(-1'000'000, 1'000'000);
    l.slave_global_ns = rng.uniform_i64(-100'000, 100'000);

    // Peer-delay exchange on the final link.
    const double tau1 = rng.uniform(0.0, 1e9);
    const double turnaround = rng.uniform(1'000.0, 10'000'000.0);
    const double tau2 = tau1 + l.link_delay_ns;
    const double tau3 = tau2 + turnaround;
    const double tau4 = tau3 + l.link_delay_ns;
    l.pd.t1 = Ledger::quant(l.slave_local(tau1));
    l.pd.t2 = Ledger::quant(l.master_time(tau2));
    l.pd.t3 = Ledger::quant(l.master_time(tau3));
    l.pd.t4 = Ledger::quant(l.slave_local(tau4));
    l.expected_delay_master_units = static_cast<Nanoseconds>(
        std::llround(l.link_delay_ns * (1.0 + l.master_drift_ppm * 1e-6)));

    // Sync through one transparent clock; residence and upstream delay are
    // already expressed in master time inside the correction field.
    const double tau5 = rng.uniform(0.0, 1e9);
    const double tau6 = tau5 + l.upstream_delay_ns + l.residence_ns + l.link_delay_ns;
    l.sync.t5 = Ledger::quant(l.master_time(tau5));
    l.sync.t6 = Ledger::quant(l.slave_global(tau6));
    const double cf_true =
        (l.upstream_delay_ns + l.residence_ns) * (1.0 + l.master_drift_ppm * 1e-6);
    l.sync.cf_sync = 0;
    l.sync.cf_followup = static_cast<Nanoseconds>(std::llround(cf_true));
    // True offset of the slave's global clock at the receipt instant.
    l.expected_offset = static_cast<Nanoseconds>(
        std::llround(l.slave_global(tau6) - l.master_time(tau6)));
    return l;
}

} // namespace tsnsim::testing
