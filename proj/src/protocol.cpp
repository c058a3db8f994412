#include "poolparty/protocol.hpp"

#include <cmath>
#include <string>

namespace poolparty {

std::int64_t ProtocolParams::slot_offset_ms(int slot) const {
    return negotiate_ms + std::llround(static_cast<double>(slot) * pulse_ms);
}

std::int64_t ProtocolParams::read_offset_ms(int slot) const {
    return negotiate_ms + std::llround((static_cast<double>(slot) + 0.5) * pulse_ms);
}

void validate_params(const ProtocolParams& params) {
    if (params.pkt_size < 1) {
        throw ValidationError("pkt_size must be >= 1, got " + std::to_string(params.pkt_size));
    }
    if (params.pkt_size > 30) {
        throw ValidationError("pkt_size " + std::to_string(params.pkt_size) +
                              " is beyond any modeled pool");
    }
    const std::int64_t needed = (std::int64_t{1} << params.pkt_size) + 1;
    if (params.pool_size < needed) {
        throw ValidationError("pool_size " + std::to_string(params.pool_size) +
                              " < 2^pkt_size + 1 = " + std::to_string(needed) +
                              "; the termination signal must exceed every data value");
    }
    if (params.negotiate_ms <= 0) {
        throw ValidationError("negotiate_interval must be > 0");
    }
    if (!(params.pulse_ms > 0.0)) {
        throw ValidationError("pulse_interval must be > 0");
    }
}

NegotiationOutcome negotiate_role(int held, int pool_size) {
    // held > pool/2 without integer truncation: compare 2*held against pool.
    const std::int64_t twice = std::int64_t{2} * held;
    if (twice > pool_size) return NegotiationOutcome::Sender;
    if (twice < pool_size) return NegotiationOutcome::Receiver;
    return NegotiationOutcome::Tie;
}

std::int64_t compute_start_time_ms(std::int64_t now_ms, const ProtocolParams& params,
                                   int chunk_count) {
    const std::int64_t total_ms =
        params.negotiate_ms + std::llround(static_cast<double>(chunk_count) * params.pulse_ms);
    // Period is the protocol duration rounded up to whole seconds.
    const std::int64_t period_ms = ((total_ms + 999) / 1000) * 1000;
    // Smallest multiple strictly greater than now.
    return (now_ms / period_ms + 1) * period_ms;
}

ReadOutcome classify_read(std::int64_t consumed, const ProtocolParams& params) {
    if (consumed == 0) return ReadOutcome::Empty;
    if (consumed > params.wire_limit()) return ReadOutcome::Termination;
    return ReadOutcome::Data;
}

void swap_roles(PartyState& sender, PartyState& receiver) {
    if (sender.phase != PartyPhase::Terminated || receiver.phase != PartyPhase::Terminated) {
        throw RoleSwapUnavailable("both parties must finish the current leg before swapping");
    }
    sender.role = PartyRole::Receiver;
    receiver.role = PartyRole::Sender;
    sender.phase = PartyPhase::RoleSwapped;
    receiver.phase = PartyPhase::RoleSwapped;
    sender.chunk_index = 0;
    receiver.chunk_index = 0;
    sender.recv_buffer = BitString{};
    receiver.recv_buffer = BitString{};
}

}  // namespace poolparty
