#include "poolparty/party.hpp"

#include <algorithm>
#include <utility>

namespace poolparty {

AttackParty::AttackParty(EventQueue& queue, ResourcePool& pool, ContextId ctx,
                         ProtocolParams params, BitString message,
                         int total_legs, PartyHooks hooks)
    : m_queue(queue),
      m_pool(pool),
      m_ctx(std::move(ctx)),
      m_params(params),
      m_message(std::move(message)),
      m_hooks(std::move(hooks)),
      m_total_legs(total_legs) {
    validate_params(m_params);
    if (m_total_legs < 1) {
        throw ValidationError("total_legs must be at least 1");
    }
    if (!m_message.empty()) {
        m_chunks = chunk_message(m_message, m_params.pkt_size);
    }
}

void AttackParty::arm(std::int64_t start_ms, int jitter_hops) {
    m_state.start_ms = start_ms;
    m_state.phase = PartyPhase::WaitStart;
    m_queue.schedule(start_ms, [this, jitter_hops] { defer_hops(jitter_hops); });
}

// Each hop re-enqueues at the current instant, sliding this party one queue
// step behind anything already scheduled at the same time.
void AttackParty::defer_hops(int hops) {
    if (hops <= 0) {
        begin_race();
        return;
    }
    m_queue.schedule(m_queue.now_ms(), [this, hops] { defer_hops(hops - 1); });
}

void AttackParty::begin_race() {
    m_state.phase = PartyPhase::Race;
    race_attempt();
}

// One resource per attempt: competing cascades interleave in the queue, so
// an open pool splits near-evenly instead of going wholesale to whoever
// fires first.
void AttackParty::race_attempt() {
    m_pool.consume_batch(m_ctx, 1, m_queue.now_ms(), [this](int granted) {
        if (granted > 0) {
            m_state.held += granted;
            race_attempt();
        } else {
            race_decided();
        }
    });
}

void AttackParty::race_decided() {
    m_race_held = m_state.held;
    m_race_finished = true;
    m_negotiated = negotiate_role(m_race_held, m_params.pool_size);

    switch (m_negotiated) {
        case NegotiationOutcome::Tie:
            // Dead split: no sender exists, back out entirely.
            m_pool.release_all(m_ctx);
            m_state.held = 0;
            terminate();
            break;
        case NegotiationOutcome::Receiver:
            m_state.role = PartyRole::Receiver;
            m_state.phase = PartyPhase::HoldOrRelease;
            m_pool.release_all(m_ctx);
            m_state.held = 0;
            begin_leg(PartyRole::Receiver, 0);
            break;
        case NegotiationOutcome::Sender:
            m_state.role = PartyRole::Sender;
            m_state.phase = PartyPhase::HoldOrRelease;
            // Soak up what the loser just released, then keep polling so
            // drift or background releases can't leak capacity before the
            // first data slot.
            absorb_pool();
            begin_leg(PartyRole::Sender, 0);
            break;
    }
}

void AttackParty::absorb_pool() {
    consume_all_unheld([this] { schedule_absorb_poll(); });
}

void AttackParty::schedule_absorb_poll() {
    const std::int64_t next = m_queue.now_ms() + 1;
    if (next >= negotiation_end_ms()) {
        return;
    }
    m_queue.schedule(next, [this] {
        if (m_state.phase == PartyPhase::HoldOrRelease) {
            absorb_pool();
        }
    });
}

// Grab everything not already held. The request is sized from the believed
// pool size; `exhaust` keeps going regardless until a whole batch is denied,
// so an undersized belief still drains the pool.
void AttackParty::consume_all_unheld(std::function<void()> then) {
    const std::int64_t want =
        std::max<std::int64_t>(1, m_params.pool_size - m_state.held);
    m_pool.exhaust(m_ctx, static_cast<int>(want),
                   [this, then = std::move(then)](int granted) {
                       m_state.held += granted;
                       then();
                   });
}

void AttackParty::begin_leg(PartyRole role, std::int64_t base_slot) {
    m_leg_base_slot = base_slot;
    m_state.role = role;
    m_state.chunk_index = 0;
    m_state.recv_buffer = BitString{};

    if (role == PartyRole::Sender) {
        if (m_chunks.empty()) {
            // Nothing to say: the leg is just the termination signal.
            m_queue.schedule(slot_time(base_slot), [this] { finish_leg_as_sender(); });
        } else {
            m_queue.schedule(slot_time(base_slot), [this] { sender_pulse(); });
        }
    } else {
        m_queue.schedule(read_time(base_slot), [this] { receiver_pulse(); });
    }
}

// Slot start: re-own the pool, then hand back value + 1 so the receiver can
// distinguish a zero chunk from silence.
void AttackParty::sender_pulse() {
    m_state.phase = PartyPhase::Pulse;
    consume_all_unheld([this] {
        const Chunk& chunk = m_chunks[static_cast<std::size_t>(m_state.chunk_index)];
        const int wire = static_cast<int>(chunk_to_int(chunk)) + 1;
        const int released = m_pool.release(m_ctx, wire);
        m_state.held -= released;
        if (m_hooks.on_sender_release) {
            // `released` can fall short of `wire` when background load holds
            // the difference; that is the corruption the receiver will see.
            m_hooks.on_sender_release(m_queue.now_ms(), released, false);
        }
        ++m_state.chunk_index;
        const std::int64_t next_slot = m_leg_base_slot + m_state.chunk_index;
        if (m_state.chunk_index < static_cast<std::int64_t>(m_chunks.size())) {
            m_queue.schedule(slot_time(next_slot), [this] { sender_pulse(); });
        } else {
            m_queue.schedule(slot_time(next_slot), [this] { finish_leg_as_sender(); });
        }
    });
}

// One slot past the last chunk: release everything. A read above 2^pkt_size
// cannot be data, so the receiver takes it as the termination signal.
void AttackParty::finish_leg_as_sender() {
    const std::int64_t base = m_leg_base_slot;
    const std::int64_t chunks = static_cast<std::int64_t>(m_chunks.size());
    const int released = m_pool.release_all(m_ctx);
    m_state.held = 0;
    if (m_hooks.on_sender_release) {
        m_hooks.on_sender_release(m_queue.now_ms(), released, true);
    }
    m_send_done_ms = m_queue.now_ms();
    advance_leg(PartyRole::Receiver, base + chunks + 1);
}

// Half-pulse offset: drain the pool, decode, restore. Reads repeat one slot
// at a time until the count leaves the data range.
void AttackParty::receiver_pulse() {
    m_state.phase = PartyPhase::Pulse;
    const int read_batch = static_cast<int>(m_params.wire_limit()) + 1;
    m_pool.exhaust(m_ctx, read_batch, [this](int consumed) {
        if (m_hooks.on_receiver_read) {
            m_hooks.on_receiver_read(m_queue.now_ms(), consumed);
        }
        m_state.held += consumed;
        switch (classify_read(consumed, m_params)) {
            case ReadOutcome::Data: {
                const Chunk chunk = int_to_chunk(
                    static_cast<std::uint64_t>(consumed) - 1, m_params.pkt_size);
                m_state.recv_buffer.append(chunk.bits());
                m_pool.release_all(m_ctx);
                m_state.held = 0;
                ++m_state.chunk_index;
                m_queue.schedule(read_time(m_leg_base_slot + m_state.chunk_index),
                                 [this] { receiver_pulse(); });
                break;
            }
            case ReadOutcome::Termination: {
                const std::int64_t base = m_leg_base_slot;
                const std::int64_t got = m_state.chunk_index;
                m_recv_done_ms = m_queue.now_ms();
                m_clean_termination = true;
                m_delivered.push_back(m_state.recv_buffer);
                if (m_leg + 1 < m_total_legs) {
                    // Next leg is ours to send: keep the pool we just drained
                    // instead of releasing and re-racing background load.
                    advance_leg(PartyRole::Sender, base + got + 1);
                } else {
                    m_pool.release_all(m_ctx);
                    m_state.held = 0;
                    advance_leg(PartyRole::Sender, base + got + 1);
                }
                break;
            }
            case ReadOutcome::Empty:
                // The sender went quiet mid-message; nothing to hand back.
                m_saw_empty_read = true;
                m_clean_termination = false;
                m_recv_done_ms = m_queue.now_ms();
                terminate();
                break;
        }
    });
}

void AttackParty::advance_leg(PartyRole next_role, std::int64_t next_base) {
    ++m_leg;
    if (m_leg >= m_total_legs) {
        terminate();
        return;
    }
    m_state.phase = PartyPhase::RoleSwapped;
    begin_leg(next_role, next_base);
}

void AttackParty::terminate() {
    m_state.phase = PartyPhase::Terminated;
    m_exit_ms = m_queue.now_ms();
}

}  // namespace poolparty
