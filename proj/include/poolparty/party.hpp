#pragma once

#include <functional>
#include <vector>

#include "poolparty/pool.hpp"
#include "poolparty/protocol.hpp"

namespace poolparty {

// Observation hooks for tests and traces. Hooks observe; they must not touch
// the pool or the queue.
struct PartyHooks {
    // Sender released `count` resources; `terminal` marks the release-all
    // that ends a leg.
    std::function<void(std::int64_t at_ms, int count, bool terminal)> on_sender_release;
    // Receiver completed a read of `consumed` resources.
    std::function<void(std::int64_t at_ms, std::int64_t consumed)> on_receiver_read;
};

// One attacking context, driven entirely by the event queue.
//
// Leg 0 starts with the negotiation race: consume one resource per queue
// step until denied, then apply the >50% rule. The winner keeps absorbing
// capacity until the negotiation interval ends; the loser releases
// everything and becomes the receiver. Data moves in pulse slots — the
// sender re-consumes the pool and releases (value + 1) at each slot start,
// the receiver drains and restores the pool at the half-pulse offset — and a
// release of everything (read > 2^pkt_size) ends the leg. With more legs
// configured, roles flip and the next leg starts at the following slot.
//
// The party never queries pool availability; everything it knows comes from
// its own grant counts, which is exactly the attacker's position.
class AttackParty {
public:
    AttackParty(EventQueue& queue, ResourcePool& pool, ContextId ctx,
                ProtocolParams params, BitString message, int total_legs = 1,
                PartyHooks hooks = {});

    // Schedule the race start at absolute `start_ms`, deferred by
    // `jitter_hops` same-time queue steps. One hop of asymmetry decides an
    // even-pool race; perfectly symmetric even-pool races tie.
    void arm(std::int64_t start_ms, int jitter_hops);

    const PartyState& state() const { return m_state; }
    const ContextId& ctx() const { return m_ctx; }
    const BitString& message() const { return m_message; }

    bool race_finished() const { return m_race_finished; }
    NegotiationOutcome negotiated() const { return m_negotiated; }
    int race_held() const { return m_race_held; }

    // Messages received, one entry per cleanly-terminated receiving leg.
    const std::vector<BitString>& delivered() const { return m_delivered; }

    bool saw_empty_read() const { return m_saw_empty_read; }
    bool terminated_cleanly() const { return m_clean_termination; }

    std::int64_t send_done_ms() const { return m_send_done_ms; }  // last terminal release
    std::int64_t recv_done_ms() const { return m_recv_done_ms; }  // last termination read
    std::int64_t exit_ms() const { return m_exit_ms; }            // entered Terminated

private:
    void defer_hops(int hops);

    // leg 0 negotiation
    void begin_race();
    void race_attempt();
    void race_decided();
    void absorb_pool();
    void schedule_absorb_poll();

    // data transfer
    void begin_leg(PartyRole role, std::int64_t base_slot);
    void sender_pulse();
    void receiver_pulse();
    void finish_leg_as_sender();
    void advance_leg(PartyRole next_role, std::int64_t next_base);
    void terminate();

    void consume_all_unheld(std::function<void()> then);

    std::int64_t slot_time(std::int64_t slot) const {
        return m_state.start_ms + m_params.slot_offset_ms(static_cast<int>(slot));
    }
    std::int64_t read_time(std::int64_t slot) const {
        return m_state.start_ms + m_params.read_offset_ms(static_cast<int>(slot));
    }
    std::int64_t negotiation_end_ms() const {
        return m_state.start_ms + m_params.negotiate_ms;
    }

    EventQueue& m_queue;
    ResourcePool& m_pool;
    ContextId m_ctx;
    ProtocolParams m_params;
    BitString m_message;
    std::vector<Chunk> m_chunks;
    PartyHooks m_hooks;

    PartyState m_state;
    bool m_race_finished = false;
    NegotiationOutcome m_negotiated = NegotiationOutcome::Tie;
    int m_race_held = 0;

    int m_total_legs = 1;
    int m_leg = 0;
    std::int64_t m_leg_base_slot = 0;

    std::vector<BitString> m_delivered;
    bool m_saw_empty_read = false;
    bool m_clean_termination = false;
    std::int64_t m_send_done_ms = -1;
    std::int64_t m_recv_done_ms = -1;
    std::int64_t m_exit_ms = -1;
};

}  // namespace poolparty
