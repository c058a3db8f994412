#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>

#include "poolparty/sim.hpp"

namespace poolparty {

// A browser security context: the (site, profile) pair the browser intends to
// keep isolated. Compared by equality only.
struct ContextId {
    std::string site;
    std::string profile;

    bool operator==(const ContextId& other) const = default;
};

// Which contexts share one pool partition.
//   Application    — everything shares (Gecko WebSockets: cross-profile)
//   Profile        — shared across sites within a profile (Chromium default)
//   Site           — partitioned per site (defense)
//   SiteAndProfile — partitioned per (site, profile) (defense)
enum class PoolScope { Application, Profile, Site, SiteAndProfile };

// Opaque partition identifier; equal keys share limit and availability.
std::string partition_key(PoolScope scope, const ContextId& ctx);

const char* pool_scope_name(PoolScope scope);
std::optional<PoolScope> pool_scope_from_name(const std::string& name);

// Limit drift: some browsers silently raise the enforced limit while the pool
// is under pressure. Modeled as +1 to the partition limit with a fixed
// probability per consume attempt; the rate is a calibration parameter.
struct DriftModel {
    bool enabled = false;
    double probability = 0.0;
};

// Consume feedback latency: a consume attempt resolves success/failure after
// a uniform delay in [0, max_delay_ms]. Zero means resolutions land at the
// same virtual instant (still as queued events, preserving global ordering).
// Releases are always immediate.
struct FeedbackModel {
    std::int64_t max_delay_ms = 0;
};

// The covert medium: a scoped resource pool with asynchronous consume and
// immediate release. Contexts can never query availability — the only
// observation channel is the grant/denial outcome of their own attempts.
// (The availability accessors below exist for tests and invariant checks;
// protocol code must not read them.)
class ResourcePool {
public:
    // per_site_cap is the HybridCap defense: a per-site ceiling stacked on
    // the shared limit.
    ResourcePool(EventQueue& queue, Rng& rng, int base_limit, PoolScope scope,
                 DriftModel drift = {}, FeedbackModel feedback = {},
                 std::optional<int> per_site_cap = std::nullopt);

    // Issue n consume attempts together at virtual time `at_ms` (>= now).
    // Each attempt resolves independently after a feedback delay; the caller
    // learns the granted count only once the last attempt has resolved.
    void consume_batch(const ContextId& ctx, int n, std::int64_t at_ms,
                       std::function<void(int granted)> on_resolved);

    // Repeatedly issue consume batches of `batch_size` until one grants
    // nothing; reports the total newly granted. The race phase uses batch
    // size 1 (one attempt per queue step — fairness depends on it); pulse
    // reads use wide batches (attempts issued in a tight loop, resolved in
    // parallel) and the repeat-until-empty loop doubles as over-consumption:
    // the caller keeps asking until the pool says no.
    void exhaust(const ContextId& ctx, int batch_size,
                 std::function<void(int total_granted)> on_done);

    // Releases min(n, held) immediately; returns the count released.
    int release(const ContextId& ctx, int n);
    int release_all(const ContextId& ctx);

    int held(const ContextId& ctx) const;

    // --- observability for tests and invariant checks only ---
    std::int64_t current_limit(const ContextId& ctx) const;
    std::int64_t available(const ContextId& ctx) const;
    int base_limit() const { return m_base_limit; }
    PoolScope scope() const { return m_scope; }
    // Conservation: available + total held == current limit, per partition.
    bool conservation_holds() const;

private:
    struct Partition {
        std::int64_t limit = 0;
        std::int64_t total_held = 0;
        std::unordered_map<std::string, int> held_by_ctx;   // site \x1f profile
        std::unordered_map<std::string, int> held_by_site;  // HybridCap accounting
    };

    Partition& partition_of(const ContextId& ctx);
    const Partition* find_partition(const ContextId& ctx) const;
    void resolve_attempt(const ContextId& ctx, std::uint64_t batch_id);
    void exhaust_round(const ContextId& ctx, int batch_size, int total_so_far,
                       std::function<void(int)> on_done);
    static std::string ctx_key(const ContextId& ctx);

    EventQueue& m_queue;
    Rng& m_rng;
    int m_base_limit;
    PoolScope m_scope;
    DriftModel m_drift;
    FeedbackModel m_feedback;
    std::optional<int> m_per_site_cap;
    std::unordered_map<std::string, Partition> m_partitions;
    // Scratch for the batch in flight; see consume_batch.
    struct BatchState {
        int remaining = 0;
        int granted = 0;
        std::function<void(int)> on_resolved;
    };
    std::uint64_t m_next_batch = 0;
    std::unordered_map<std::uint64_t, BatchState> m_batches;
};

}  // namespace poolparty
