#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "poolparty/noise.hpp"
#include "poolparty/party.hpp"
#include "poolparty/pool.hpp"
#include "poolparty/presets.hpp"
#include "poolparty/protocol.hpp"

namespace poolparty {

enum class DefenseKind { None, PartitionBySite, WidenPool, HybridCap };

struct Defense {
    DefenseKind kind = DefenseKind::None;
    double widen_factor = 1.0;  // WidenPool: multiply the pool limit
    int per_site_limit = 1;     // HybridCap: max held per site
};

std::string defense_name(const Defense& defense);

// Full experiment configuration: protocol tuning, the two colluding
// contexts, environment (noise/drift/feedback), a defense to evaluate, and
// the trial plan. Build one via scenario_from_preset() or parse_scenario().
struct Scenario {
    ProtocolParams params;  // pool belief + packet width + intervals
    PoolScope scope = PoolScope::Profile;
    ContextId sender_ctx{"site-a", "default"};
    ContextId receiver_ctx{"site-b", "default"};
    NoiseProfile noise;       // tab_count 0 = noiseless
    DriftModel drift;
    FeedbackModel feedback;
    Defense defense;
    int trials = 1;
    std::uint64_t seed = 0;

    // Message content; generated from the seed when empty and
    // message_bits > 0 (content is immaterial to the measurements).
    BitString message;
    int message_bits = 0;

    // Actual pool base limit when it differs from the parties' belief
    // (params.pool_size); 0 means they agree. Lets tests model a stale or
    // probe-derived belief.
    int pool_limit = 0;

    // One same-time queue hop separating the two race starts. Zero makes
    // perfectly symmetric races possible (even pools then tie).
    int start_jitter_hops = 1;

    // Extra role-swapped legs after the first message (0 = one-way).
    int continuations = 0;

    // Simulator guard: a trial exceeding this many events is a dead channel.
    std::int64_t event_cap = 200'000;

    // Resources held by a bystander for the whole trial (reduces effective
    // capacity without timing interaction; used by neutrality tests).
    int static_hold = 0;
};

// Scenario preloaded with a preset's pool and protocol tuning plus the
// defaults above; message_bits defaults to one seven-chunk plan.
Scenario scenario_from_preset(const BrowserPreset& preset);
Scenario scenario_from_preset(const std::string& preset_name);

// Throws ValidationError on any violated scenario invariant.
void validate_scenario(const Scenario& scenario);

enum class FailureKind { None, NegotiationTie, CorruptedChunk, EarlyTermination, ChannelDead };
std::string failure_kind_name(FailureKind kind);

// One trial's outcome. Times are integer virtual milliseconds: setup spans
// race start → negotiation end, send spans negotiation end → the sender's
// final release-all (the termination signal), and the pre-race alignment
// wait is recorded separately so total == setup + send exactly.
struct TrialResult {
    bool success = false;
    std::int64_t setup_ms = 0;
    std::int64_t send_ms = 0;
    std::int64_t total_ms = 0;
    std::int64_t wait_ms = 0;
    int bits_correct = 0;
    FailureKind failure_kind = FailureKind::None;
};

struct ExperimentSummary {
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    // Means over successful trials (failure timings are degenerate).
    double mean_setup_s = 0.0;
    double mean_send_s = 0.0;
    double mean_total_s = 0.0;
    // message bits / mean total seconds, over successes; 0 when none.
    double throughput_bits_per_s = 0.0;
    int message_bits = 0;
    std::map<FailureKind, int> failure_counts;
};

// The scenario's message: the explicit one, or bits generated from the
// scenario seed when only message_bits is given.
BitString resolve_message(const Scenario& scenario);

// One trial under a fresh pool + scheduler + derived seed (clean-profile
// semantics). Deterministic in (scenario, trial_index); an event-cap blowup
// is reported as ChannelDead, never thrown.
TrialResult run_trial(const Scenario& scenario, int trial_index);

// All trials, trial i seeded independently of execution order. Runs the
// trial loop in parallel when OpenMP is enabled; results are identical to
// the serial loop because each trial is self-contained and slots into its
// own index.
std::vector<TrialResult> run_all_trials(const Scenario& scenario);

// Serial reference for the parallel loop above; kept for testing and
// benchmarking.
std::vector<TrialResult> run_all_trials_serial(const Scenario& scenario);

ExperimentSummary summarize(const std::vector<TrialResult>& results, int message_bits);

ExperimentSummary run_trials(const Scenario& scenario);

// Bisect drift_probability on a noiseless preset scenario until the observed
// success rate is within 0.05 of `target` (or 20 iterations). Success is
// monotone non-increasing in drift probability; the endpoints are checked
// first and CalibrationFailed is thrown when they do not bracket the target.
double calibrate_drift(const BrowserPreset& preset, double target_success,
                       int trials, std::uint64_t seed);

// Re-run the identical trial plan under None, PartitionBySite,
// WidenPool(x100), and HybridCap(pool/8): same seeds, only the defense
// varies. WidenPool also scales noise arrivals by the factor (the wider
// OS-level pool sees proportionally more background churn).
std::vector<std::pair<Defense, ExperimentSummary>> evaluate_defenses(
    const Scenario& base_scenario);

// One summary per value of the named parameter, fixed master seed.
// Parameters: pulse_interval, negotiate_interval, arrival_rate,
// drift_probability, tab_count (scenario-file spellings accepted too).
// Throws UnknownParameter otherwise.
std::vector<std::pair<double, ExperimentSummary>> sweep(
    const Scenario& scenario, const std::string& parameter,
    const std::vector<double>& values);

}  // namespace poolparty
