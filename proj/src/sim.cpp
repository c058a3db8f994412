#include "poolparty/sim.hpp"

#include <cmath>

namespace poolparty {

std::uint64_t Rng::bounded(std::uint64_t bound) {
    if (bound == 0) throw InvalidDistribution("bounded(0) is empty");
    // Reject the tail that would bias the modulo.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InvalidDistribution("uniform_int with lo > hi");
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<std::int64_t>(bounded(span));
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw InvalidDistribution("bernoulli p outside [0, 1]");
    return uniform01() < p;
}

double Rng::exponential(double mean) {
    if (mean < 0.0) throw InvalidDistribution("exponential with negative mean");
    if (mean == 0.0) return 0.0;
    // 1 - u is in (0, 1], so the log is finite.
    return -mean * std::log(1.0 - uniform01());
}

std::int64_t Rng::poisson(double mean) {
    if (mean < 0.0) throw InvalidDistribution("poisson with negative mean");
    if (mean == 0.0) return 0;
    // Knuth's product method; fine for the small means noise models use.
    const double floor_p = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01();
    } while (p > floor_p);
    return k - 1;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 over (master ^ golden-ratio stride): distinct, well-mixed
    // streams per index, independent of evaluation order.
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double sample(Rng& rng, const DistSpec& spec) {
    switch (spec.kind) {
        case DistSpec::Kind::Bernoulli:
            return rng.bernoulli(spec.a) ? 1.0 : 0.0;
        case DistSpec::Kind::UniformInt:
            return static_cast<double>(rng.uniform_int(
                static_cast<std::int64_t>(spec.a), static_cast<std::int64_t>(spec.b)));
        case DistSpec::Kind::UniformReal: {
            if (spec.b < spec.a) throw InvalidDistribution("uniform with hi < lo");
            return spec.a + (spec.b - spec.a) * rng.uniform01();
        }
        case DistSpec::Kind::Exponential:
            return rng.exponential(spec.a);
        case DistSpec::Kind::Poisson:
            return static_cast<double>(rng.poisson(spec.a));
    }
    throw InvalidDistribution("unknown distribution kind");
}

void EventQueue::schedule(std::int64_t at_ms, std::function<void()> fn) {
    if (at_ms < m_clock.now_ms) {
        throw PastEvent("event scheduled at " + std::to_string(at_ms) +
                        "ms, but now is " + std::to_string(m_clock.now_ms) + "ms");
    }
    m_queue.push(Entry{at_ms, m_next_seq++, std::move(fn)});
}

std::int64_t EventQueue::run_until_idle(std::uint64_t max_events) {
    while (!m_queue.empty()) {
        if (m_processed >= max_events) {
            throw EventLimitExceeded("event limit " + std::to_string(max_events) +
                                     " exceeded at " + std::to_string(m_clock.now_ms) + "ms");
        }
        // priority_queue::top is const; the handler is moved out before pop.
        Entry e = std::move(const_cast<Entry&>(m_queue.top()));
        m_queue.pop();
        m_clock.now_ms = e.at_ms;
        ++m_processed;
        e.fn();
    }
    return m_clock.now_ms;
}

}  // namespace poolparty
