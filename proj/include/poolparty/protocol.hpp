#pragma once

#include <cstdint>

#include "poolparty/bits.hpp"

namespace poolparty {

enum class PartyRole { Unassigned, Sender, Receiver };

// Lifecycle of one party:
//   WaitStart     — armed, waiting for the aligned start time
//   Race          — consuming one-by-one, racing the peer to exhaustion
//   HoldOrRelease — race decided; winner absorbs the pool, loser released it
//   Pulse         — data transfer (send pulses / half-offset reads)
//   Terminated    — done (message complete, fault, or tie)
//   RoleSwapped   — between legs of a bidirectional run
enum class PartyPhase { WaitStart, Race, HoldOrRelease, Pulse, Terminated, RoleSwapped };

enum class NegotiationOutcome { Sender, Receiver, Tie };

// Everything both parties agree on out-of-band before the attack: the pool
// capacity they expect to exploit, packet width, and the two intervals.
// pool_size is the attacker's *belief* (a pre-attack probe of the limit);
// the actual pool may differ (drift, defenses) — that mismatch is signal.
struct ProtocolParams {
    int pool_size = 0;
    int pkt_size = 0;
    std::int64_t negotiate_ms = 0;
    double pulse_ms = 0.0;  // fractional values allowed; see slot_offset_ms

    // Largest on-wire data value + 1: a read strictly above this is the
    // termination signal.
    std::int64_t wire_limit() const { return std::int64_t{1} << pkt_size; }

    // Offset of pulse slot `slot` from the race start. Computed
    // multiplicatively and rounded per slot so fractional pulse intervals
    // (e.g. 5000/7 ms) never accumulate error: slot(7) of a 5000/7 ms pulse
    // lands on exactly 7000 ms of a 2 s negotiation + 5 s send schedule.
    std::int64_t slot_offset_ms(int slot) const;

    // Offset of the receiver's read in slot `slot`: half a pulse after the
    // sender's release.
    std::int64_t read_offset_ms(int slot) const;
};

// Throws ValidationError when params violate the protocol preconditions
// (pool_size >= 2^pkt_size + 1, pkt_size >= 1, positive intervals).
void validate_params(const ProtocolParams& params);

// The >50% rule from the negotiation race. `held` is what this party managed
// to consume, `pool_size` its believed capacity; call only once the pool is
// exhausted. Exactly half (even pools, symmetric race) is a detectable tie.
NegotiationOutcome negotiate_role(int held, int pool_size);

// Aligned start: the smallest integer multiple of the period strictly
// greater than `now`, where the period is the whole protocol duration
// (negotiation + all pulses) rounded up to whole seconds. Both parties
// compute this independently from shared params, which is the whole point.
std::int64_t compute_start_time_ms(std::int64_t now_ms, const ProtocolParams& params,
                                   int chunk_count);

// Classification of one receiver read: c == 0 is a dead channel, c above the
// wire limit is the termination signal, anything else carries value c - 1.
enum class ReadOutcome { Empty, Data, Termination };
ReadOutcome classify_read(std::int64_t consumed, const ProtocolParams& params);

struct PartyState {
    PartyRole role = PartyRole::Unassigned;
    PartyPhase phase = PartyPhase::WaitStart;
    int held = 0;
    int chunk_index = 0;
    BitString recv_buffer;
    std::int64_t start_ms = 0;
};

// Exchange roles between legs of a bidirectional run. Both parties must have
// finished their current leg; per-leg progress resets, roles flip.
void swap_roles(PartyState& sender, PartyState& receiver);

}  // namespace poolparty
