//
// SPDX-License-Identifier: Apache-2.0
//

#include "tsnsim/ptp.hpp"

#include <cmath>

namespace tsnsim {

const char* to_string(PtpKind k)
{
    switch (k) {
        case PtpKind::Sync: return "Sync";
        case PtpKind::FollowUp: return "Follow_Up";
        case PtpKind::PdelayReq: return "Pdelay_Req";
        case PtpKind::PdelayResp: return "Pdelay_Resp";
        case PtpKind::PdelayRespFollowUp: return "Pdelay_Resp_Follow_Up";
    }
    return "?";
}

std::optional<Nanoseconds> peer_delay(const PdelayTimestamps& ts, double rate_ratio)
{
    const double turnaround = static_cast<double>(ts.t4 - ts.t1) * rate_ratio;
    const double resident = static_cast<double>(ts.t3 - ts.t2);
    const Nanoseconds d = static_cast<Nanoseconds>(std::llround((turnaround - resident) / 2.0));
    if (d < 0)
        return std::nullopt;
    return d;
}

Nanoseconds sync_offset(const SyncTimestamps& ts, Nanoseconds peer_delay_ns)
{
    return ts.t6 - ts.t5 - peer_delay_ns - (ts.cf_sync + ts.cf_followup);
}

std::optional<Nanoseconds> direct_peer_delay(Nanoseconds t5, Nanoseconds t6_global,
                                             Nanoseconds cf_total)
{
    const Nanoseconds d = t6_global - t5 - cf_total;
    if (d < 0)
        return std::nullopt;
    return d;
}

Nanoseconds collision_compensation_s1(Nanoseconds offset_parent_ns,
                                      Nanoseconds offset_child_ns, double rate_ratio)
{
    const double v = 0.5 * rate_ratio * static_cast<double>(offset_child_ns) -
                     0.5 * static_cast<double>(offset_parent_ns);
    return static_cast<Nanoseconds>(std::llround(v));
}

Nanoseconds collision_error_s2(Nanoseconds offset_parent_ns,
                               Nanoseconds offset_child_ns, double rate_ratio)
{
    const double v = rate_ratio * static_cast<double>(offset_child_ns) -
                     0.5 * static_cast<double>(offset_parent_ns);
    return static_cast<Nanoseconds>(std::llround(v));
}

Nanoseconds mobility_error(Nanoseconds d_at_t9_ns, Nanoseconds d_at_t5_ns)
{
    return d_at_t9_ns - d_at_t5_ns;
}

} // namespace tsnsim
