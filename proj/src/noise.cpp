#include "poolparty/noise.hpp"

#include <cmath>
#include <memory>

#include "poolparty/errors.hpp"

namespace poolparty {

namespace {

// One tab's arrival loop. Self-reschedules until the horizon; each burst
// consumes, holds, and releases exactly what it was granted, so noise can
// never leak or manufacture capacity.
struct Tab {
    EventQueue* queue;
    ResourcePool* pool;
    ContextId ctx;
    NoiseProfile noise;
    Rng* rng;
    std::int64_t horizon_ms;

    void schedule_next(std::shared_ptr<Tab> self) {
        const double gap_s = rng->exponential(1.0 / noise.arrival_rate);
        const std::int64_t at =
            queue->now_ms() + static_cast<std::int64_t>(std::llround(gap_s * 1000.0));
        if (at > horizon_ms) {
            return;
        }
        queue->schedule(at, [self] { self->burst(self); });
    }

    void burst(std::shared_ptr<Tab> self) {
        const int want = rng->uniform_int(1, noise.burst_max);
        pool->consume_batch(ctx, want, queue->now_ms(), [self](int granted) {
            if (granted > 0) {
                const double hold_s = self->rng->exponential(self->noise.hold_mean_s);
                const std::int64_t release_at =
                    self->queue->now_ms() +
                    static_cast<std::int64_t>(std::llround(hold_s * 1000.0));
                self->queue->schedule(release_at, [self, granted] {
                    self->pool->release(self->ctx, granted);
                });
            }
        });
        schedule_next(self);
    }
};

}  // namespace

int spawn_noise(EventQueue& queue, ResourcePool& pool, const NoiseProfile& noise,
                Rng& rng, std::int64_t horizon_ms, const std::string& profile) {
    if (noise.tab_count < 0 || noise.burst_max < 1 ||
        noise.api_use_probability < 0.0 || noise.api_use_probability > 1.0 ||
        noise.arrival_rate < 0.0 || noise.hold_mean_s < 0.0) {
        throw ValidationError("invalid noise profile");
    }
    int active = 0;
    for (int i = 0; i < noise.tab_count; ++i) {
        if (!rng.bernoulli(noise.api_use_probability)) {
            continue;
        }
        if (noise.arrival_rate <= 0.0) {
            continue;  // activated but never fires
        }
        ++active;
        auto tab = std::make_shared<Tab>();
        tab->queue = &queue;
        tab->pool = &pool;
        tab->ctx = ContextId{"bg-" + std::to_string(i), profile};
        tab->noise = noise;
        tab->rng = &rng;
        tab->horizon_ms = horizon_ms;
        tab->schedule_next(tab);
    }
    return active;
}

}  // namespace poolparty
