#pragma once

#include <cstdint>
#include <string>

#include "poolparty/pool.hpp"

namespace poolparty {

// Background browsing load on the shared pool. Each simulated tab flips an
// activation coin; active tabs then generate Poisson request bursts
// (exponential interarrival), hold what they were granted for an
// exponentially-distributed time, and release it.
struct NoiseProfile {
    int tab_count = 0;
    double api_use_probability = 0.5;  // chance a tab touches this API at all
    double arrival_rate = 0.1;         // bursts per second per active tab
    double hold_mean_s = 10.0;         // mean hold time per burst
    int burst_max = 4;                 // burst size ~ uniform {1..burst_max}
};

// Schedule a profile's worth of tab activity on `queue` against `pool`,
// starting at t=0 and ceasing new arrivals past `horizon_ms` (holds in
// flight still release). Tabs are distinct sites ("bg-0", "bg-1", ...)
// within `profile` so profile-scoped pools see them as the victim does.
// Returns the number of tabs that activated.
int spawn_noise(EventQueue& queue, ResourcePool& pool, const NoiseProfile& noise,
                Rng& rng, std::int64_t horizon_ms, const std::string& profile);

}  // namespace poolparty
