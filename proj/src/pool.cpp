#include "poolparty/pool.hpp"

namespace poolparty {

std::string partition_key(PoolScope scope, const ContextId& ctx) {
    switch (scope) {
        case PoolScope::Application:
            return "app";
        case PoolScope::Profile:
            return "profile\x1f" + ctx.profile;
        case PoolScope::Site:
            return "site\x1f" + ctx.site;
        case PoolScope::SiteAndProfile:
            return "site+profile\x1f" + ctx.site + "\x1f" + ctx.profile;
    }
    return "app";
}

const char* pool_scope_name(PoolScope scope) {
    switch (scope) {
        case PoolScope::Application:    return "application";
        case PoolScope::Profile:        return "profile";
        case PoolScope::Site:           return "site";
        case PoolScope::SiteAndProfile: return "site_profile";
    }
    return "?";
}

std::optional<PoolScope> pool_scope_from_name(const std::string& name) {
    if (name == "application")  return PoolScope::Application;
    if (name == "profile")      return PoolScope::Profile;
    if (name == "site")         return PoolScope::Site;
    if (name == "site_profile") return PoolScope::SiteAndProfile;
    return std::nullopt;
}

ResourcePool::ResourcePool(EventQueue& queue, Rng& rng, int base_limit, PoolScope scope,
                           DriftModel drift, FeedbackModel feedback,
                           std::optional<int> per_site_cap)
    : m_queue(queue),
      m_rng(rng),
      m_base_limit(base_limit),
      m_scope(scope),
      m_drift(drift),
      m_feedback(feedback),
      m_per_site_cap(per_site_cap) {
    if (base_limit < 1) {
        throw InvalidLimit("pool limit must be >= 1, got " + std::to_string(base_limit));
    }
    if (drift.probability < 0.0 || drift.probability > 1.0) {
        throw InvalidDistribution("drift probability outside [0, 1]");
    }
    if (feedback.max_delay_ms < 0) {
        throw InvalidDistribution("feedback delay must be >= 0");
    }
    if (per_site_cap && *per_site_cap < 1) {
        throw InvalidLimit("per-site cap must be >= 1");
    }
}

std::string ResourcePool::ctx_key(const ContextId& ctx) {
    return ctx.site + "\x1f" + ctx.profile;
}

ResourcePool::Partition& ResourcePool::partition_of(const ContextId& ctx) {
    auto [it, inserted] = m_partitions.try_emplace(partition_key(m_scope, ctx));
    if (inserted) it->second.limit = m_base_limit;
    return it->second;
}

const ResourcePool::Partition* ResourcePool::find_partition(const ContextId& ctx) const {
    auto it = m_partitions.find(partition_key(m_scope, ctx));
    return it == m_partitions.end() ? nullptr : &it->second;
}

void ResourcePool::consume_batch(const ContextId& ctx, int n, std::int64_t at_ms,
                                 std::function<void(int)> on_resolved) {
    if (n < 1) throw PoolAccessFailure("consume batch must request at least 1");
    const std::uint64_t id = m_next_batch++;
    m_batches.emplace(id, BatchState{n, 0, std::move(on_resolved)});
    for (int i = 0; i < n; ++i) {
        // All attempts are issued together ("tight loop"); each resolves
        // after its own delay. Ordering among same-time resolutions — and
        // against everything else in the trial — is the queue's tie-break.
        const std::int64_t delay =
            m_feedback.max_delay_ms == 0 ? 0 : m_rng.uniform_int(0, m_feedback.max_delay_ms);
        m_queue.schedule(at_ms + delay, [this, ctx, id] { resolve_attempt(ctx, id); });
    }
}

void ResourcePool::resolve_attempt(const ContextId& ctx, std::uint64_t batch_id) {
    Partition& part = partition_of(ctx);
    // Drift is rolled once per attempt, before the grant check, so a lucky
    // roll can flip a would-be denial into a grant — that's the corruption
    // mechanism: mid-read drift hands the receiver one extra resource.
    if (m_drift.enabled && m_rng.bernoulli(m_drift.probability)) {
        ++part.limit;
    }
    bool grant = part.total_held < part.limit;
    if (grant && m_per_site_cap) {
        auto it = part.held_by_site.find(ctx.site);
        if (it != part.held_by_site.end() && it->second >= *m_per_site_cap) grant = false;
    }
    if (grant) {
        ++part.total_held;
        ++part.held_by_ctx[ctx_key(ctx)];
        ++part.held_by_site[ctx.site];
    }

    auto it = m_batches.find(batch_id);
    BatchState& batch = it->second;
    if (grant) ++batch.granted;
    if (--batch.remaining == 0) {
        auto done = std::move(batch.on_resolved);
        const int granted = batch.granted;
        m_batches.erase(it);
        done(granted);
    }
}

void ResourcePool::exhaust(const ContextId& ctx, int batch_size,
                           std::function<void(int)> on_done) {
    if (batch_size < 1) throw PoolAccessFailure("exhaust batch size must be >= 1");
    exhaust_round(ctx, batch_size, 0, std::move(on_done));
}

void ResourcePool::exhaust_round(const ContextId& ctx, int batch_size, int total_so_far,
                                 std::function<void(int)> on_done) {
    consume_batch(ctx, batch_size, m_queue.now_ms(),
                  [this, ctx, batch_size, total_so_far, on_done = std::move(on_done)](int granted) {
                      if (granted > 0) {
                          exhaust_round(ctx, batch_size, total_so_far + granted, std::move(on_done));
                      } else {
                          on_done(total_so_far);
                      }
                  });
}

int ResourcePool::release(const ContextId& ctx, int n) {
    if (n < 0) throw PoolAccessFailure("cannot release a negative count");
    if (n == 0) return 0;
    Partition& part = partition_of(ctx);
    auto it = part.held_by_ctx.find(ctx_key(ctx));
    if (it == part.held_by_ctx.end()) return 0;
    const int released = std::min(n, it->second);
    it->second -= released;
    part.total_held -= released;
    part.held_by_site[ctx.site] -= released;
    return released;
}

int ResourcePool::release_all(const ContextId& ctx) {
    return release(ctx, held(ctx));
}

int ResourcePool::held(const ContextId& ctx) const {
    const Partition* part = find_partition(ctx);
    if (!part) return 0;
    auto it = part->held_by_ctx.find(ctx_key(ctx));
    return it == part->held_by_ctx.end() ? 0 : it->second;
}

std::int64_t ResourcePool::current_limit(const ContextId& ctx) const {
    const Partition* part = find_partition(ctx);
    return part ? part->limit : m_base_limit;
}

std::int64_t ResourcePool::available(const ContextId& ctx) const {
    const Partition* part = find_partition(ctx);
    return part ? part->limit - part->total_held : m_base_limit;
}

bool ResourcePool::conservation_holds() const {
    for (const auto& [key, part] : m_partitions) {
        std::int64_t held_sum = 0;
        for (const auto& [ctx, count] : part.held_by_ctx) {
            if (count < 0) return false;
            held_sum += count;
        }
        if (held_sum != part.total_held) return false;
        if (part.total_held > part.limit) return false;
        if (part.limit < m_base_limit) return false;
    }
    return true;
}

}  // namespace poolparty
