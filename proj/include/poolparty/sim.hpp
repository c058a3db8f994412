#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <vector>

#include "poolparty/errors.hpp"

namespace poolparty {

// Virtual time in integer milliseconds. Every interval the protocol uses is
// derived from second-granularity browser timings, so ms never truncates
// anything that matters; fractional slot boundaries are rounded per slot
// (see protocol.hpp) so rounding error cannot accumulate.
struct VirtualClock {
    std::int64_t now_ms = 0;
};

// Deterministic RNG. mt19937_64 gives a portable stream, but the std::
// distribution adapters are implementation-defined, so every transform we
// rely on is hand-rolled here. Same seed => same draw sequence, everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_gen(seed) {}

    std::uint64_t next_u64() { return m_gen(); }

    // Uniform in [0, bound); rejection-sampled so the mapping is exact.
    std::uint64_t bounded(std::uint64_t bound);

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Uniform in [0, 1) with 53 random bits.
    double uniform01();

    bool bernoulli(double p);          // p in [0, 1]
    double exponential(double mean);   // mean >= 0; mean == 0 => 0
    std::int64_t poisson(double mean); // mean >= 0

private:
    std::mt19937_64 m_gen;
};

// Stable per-trial seed derivation: mixes the master seed with the trial
// index so trials can run in any order (or in parallel) and still see
// identical streams.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// Distribution spec for the generic sampler; lets experiment configs carry a
// distribution as data.
struct DistSpec {
    enum class Kind { Bernoulli, UniformInt, UniformReal, Exponential, Poisson };
    Kind kind = Kind::UniformReal;
    double a = 0.0;  // Bernoulli: p; UniformInt/Real: lo; Exponential/Poisson: mean
    double b = 0.0;  // UniformInt/Real: hi
};

double sample(Rng& rng, const DistSpec& spec);

// Discrete event queue ordered by (fire time, insertion sequence): two events
// at the same virtual time run in the order they were scheduled. That
// tie-break is load-bearing — negotiation fairness depends on it.
class EventQueue {
public:
    std::int64_t now_ms() const { return m_clock.now_ms; }

    // Schedule `fn` at absolute virtual time `at_ms` (>= now, else PastEvent).
    void schedule(std::int64_t at_ms, std::function<void()> fn);

    void schedule_in(std::int64_t delta_ms, std::function<void()> fn) {
        schedule(now_ms() + delta_ms, std::move(fn));
    }

    // Run until no events remain; returns the final virtual time. Throws
    // EventLimitExceeded after `max_events` (runaway-protocol guard).
    std::int64_t run_until_idle(std::uint64_t max_events = 1'000'000);

    std::uint64_t events_processed() const { return m_processed; }

private:
    struct Entry {
        std::int64_t at_ms;
        std::uint64_t seq;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at_ms != b.at_ms) return a.at_ms > b.at_ms;
            return a.seq > b.seq;
        }
    };

    VirtualClock m_clock;
    std::priority_queue<Entry, std::vector<Entry>, Later> m_queue;
    std::uint64_t m_next_seq = 0;
    std::uint64_t m_processed = 0;
};

}  // namespace poolparty
