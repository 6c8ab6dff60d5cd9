//
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tsnsim/time.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace tsnsim {

enum class PtpKind : std::uint8_t {
    Sync,
    FollowUp,
    PdelayReq,
    PdelayResp,
    PdelayRespFollowUp,
};

const char* to_string(PtpKind k);

/// Two-step PTP message as carried inside simulated frames. Only the fields
/// the peer-to-peer transparent-clock profile needs; no TLVs, no Announce.
struct PtpMessage {
    PtpKind kind = PtpKind::Sync;
    std::uint16_t seq_id = 0;
    Nanoseconds origin_ts_ns = 0;     // FollowUp: Sync egress; RespFU: t3
    bool has_origin = false;
    Nanoseconds correction_ns = 0;    // CF, integer ns
    Nanoseconds req_receipt_ns = 0;   // PdelayResp: t2
    double rate_ratio_acc = 1.0;      // cumulative neighbor-ratio product
    int source_node = -1;
    int source_port = -1;
};

/// t1..t4 of one peer-delay exchange: Req send (requester), Req receive
/// (responder), Resp send (responder), Resp receive (requester).
struct PdelayTimestamps {
    Nanoseconds t1 = 0;
    Nanoseconds t2 = 0;
    Nanoseconds t3 = 0;
    Nanoseconds t4 = 0;
};

/// t5/t6 and the two correction fields entering Eq.-style offset math.
struct SyncTimestamps {
    Nanoseconds t5 = 0;       // Sync origin at the master (from FollowUp)
    Nanoseconds t6 = 0;       // Sync receipt at the slave, per counter mode
    Nanoseconds cf_sync = 0;
    Nanoseconds cf_followup = 0;
};

enum class PeerDelayMode { Standard, DirectAfterConvergence };

struct PeerDelayState {
    Nanoseconds measured_delay_ns = 0;
    SimTime measured_at{0};
    PeerDelayMode mode = PeerDelayMode::Standard;
    bool converged = false;
    bool valid = false;
};

/// Peer delay from one exchange: (rate_ratio*(t4-t1) - (t3-t2)) / 2,
/// rounded to integer ns. Negative results signal a measurement fault and
/// return nullopt; the caller keeps its previous measurement.
std::optional<Nanoseconds> peer_delay(const PdelayTimestamps& ts, double rate_ratio);

/// Synchronization offset: t6 - t5 - peer_delay - (cf_sync + cf_followup).
Nanoseconds sync_offset(const SyncTimestamps& ts, Nanoseconds peer_delay_ns);

/// Post-convergence direct peer delay: t6(global) - t5 - accumulated CF.
/// Negative results are faults (nullopt).
std::optional<Nanoseconds> direct_peer_delay(Nanoseconds t5, Nanoseconds t6_global,
                                             Nanoseconds cf_total);

/// Collision scenario 1: peer-delay error when both link ends applied an
/// offset mid-exchange; subtracting this restores the clean measurement.
Nanoseconds collision_compensation_s1(Nanoseconds offset_parent_ns,
                                      Nanoseconds offset_child_ns, double rate_ratio);

/// Collision scenario 2: labeled error magnitude when the responder synced
/// mid-exchange but the child had not; software cannot compensate this one,
/// so it is only used to annotate metrics.
Nanoseconds collision_error_s2(Nanoseconds offset_parent_ns,
                               Nanoseconds offset_child_ns, double rate_ratio);

/// Mobility-induced offset error: d(T9) - d(T5) where d is the
/// true-minus-measured peer delay at the two instants.
Nanoseconds mobility_error(Nanoseconds d_at_t9_ns, Nanoseconds d_at_t5_ns);

} // namespace tsnsim
