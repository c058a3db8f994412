#include "poolparty/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "poolparty/errors.hpp"

namespace poolparty {

std::string defense_name(const Defense& defense) {
    switch (defense.kind) {
        case DefenseKind::None: return "none";
        case DefenseKind::PartitionBySite: return "partition_site";
        case DefenseKind::WidenPool: return "widen_pool";
        case DefenseKind::HybridCap: return "hybrid_cap";
    }
    return "?";
}

std::string failure_kind_name(FailureKind kind) {
    switch (kind) {
        case FailureKind::None: return "None";
        case FailureKind::NegotiationTie: return "NegotiationTie";
        case FailureKind::CorruptedChunk: return "CorruptedChunk";
        case FailureKind::EarlyTermination: return "EarlyTermination";
        case FailureKind::ChannelDead: return "ChannelDead";
    }
    return "?";
}

Scenario scenario_from_preset(const BrowserPreset& preset) {
    Scenario sc;
    sc.params.pool_size = preset.pool_size;
    sc.params.pkt_size = preset.pkt_size;
    sc.params.negotiate_ms =
        static_cast<std::int64_t>(std::llround(preset.negotiate_interval_s * 1000.0));
    sc.params.pulse_ms = preset.pulse_interval_s * 1000.0;
    sc.scope = preset.scope;
    sc.message_bits = 7 * preset.pkt_size;  // one seven-chunk plan
    return sc;
}

Scenario scenario_from_preset(const std::string& preset_name) {
    return scenario_from_preset(find_preset(preset_name));
}

void validate_scenario(const Scenario& scenario) {
    validate_params(scenario.params);
    if (scenario.trials < 1) {
        throw ValidationError("trials must be >= 1");
    }
    if (scenario.defense.kind == DefenseKind::WidenPool &&
        scenario.defense.widen_factor < 1.0) {
        throw ValidationError("widen_pool factor must be >= 1");
    }
    if (scenario.defense.kind == DefenseKind::HybridCap &&
        scenario.defense.per_site_limit < 1) {
        throw ValidationError("hybrid_cap per-site limit must be >= 1");
    }
    if (scenario.message.empty() && scenario.message_bits < 0) {
        throw ValidationError("message_bits must be >= 0");
    }
    if (scenario.start_jitter_hops < 0) {
        throw ValidationError("start_jitter_hops must be >= 0");
    }
    if (scenario.continuations < 0) {
        throw ValidationError("continuations must be >= 0");
    }
    if (scenario.pool_limit < 0 || scenario.static_hold < 0) {
        throw ValidationError("pool_limit and static_hold must be >= 0");
    }
    const int bits = scenario.message.empty()
                         ? scenario.message_bits
                         : static_cast<int>(scenario.message.size());
    if (bits % scenario.params.pkt_size != 0) {
        throw ValidationError("message length must be a multiple of pkt_size");
    }
}

BitString resolve_message(const Scenario& scenario) {
    if (!scenario.message.empty()) {
        return scenario.message;
    }
    BitString message;
    if (scenario.message_bits <= 0) {
        return message;
    }
    // Substream 0 of the master seed; trials use substreams 1..N.
    Rng rng(derive_seed(scenario.seed, 0));
    for (int i = 0; i < scenario.message_bits; ++i) {
        message.push_back(static_cast<std::uint8_t>(rng.uniform_int(0, 1)));
    }
    return message;
}

namespace {

// The scenario with its defense folded into pool/protocol/noise parameters.
struct EffectiveConfig {
    int pool_limit = 0;    // what the pool enforces
    int pool_belief = 0;   // what the parties assume
    PoolScope scope = PoolScope::Profile;
    std::optional<int> per_site_cap;
    NoiseProfile noise;
};

EffectiveConfig apply_defense(const Scenario& sc) {
    EffectiveConfig cfg;
    cfg.pool_limit = sc.pool_limit > 0 ? sc.pool_limit : sc.params.pool_size;
    cfg.pool_belief = sc.params.pool_size;
    cfg.scope = sc.scope;
    cfg.noise = sc.noise;
    switch (sc.defense.kind) {
        case DefenseKind::None:
            break;
        case DefenseKind::PartitionBySite:
            // Pool keyed by site: each party only ever sees its own slice.
            cfg.scope = PoolScope::Site;
            break;
        case DefenseKind::WidenPool: {
            // A much larger OS-level pool — which both parties can re-probe,
            // and which proportionally more background activity churns.
            const double f = sc.defense.widen_factor;
            cfg.pool_limit = static_cast<int>(std::llround(cfg.pool_limit * f));
            cfg.pool_belief = static_cast<int>(std::llround(cfg.pool_belief * f));
            cfg.noise.arrival_rate *= f;
            break;
        }
        case DefenseKind::HybridCap:
            cfg.per_site_cap = sc.defense.per_site_limit;
            break;
    }
    return cfg;
}

struct TrialDebrief {
    const AttackParty* sender = nullptr;
    const AttackParty* receiver = nullptr;
    bool tie = false;
};

TrialDebrief assign_roles(const AttackParty& a, const AttackParty& b) {
    TrialDebrief d;
    // One party detecting a tie is enough to kill the channel: it backs out
    // on the >50% rule, and whatever the survivor's cascade sweeps up
    // afterwards, nobody is left to talk to.
    d.tie = a.negotiated() == NegotiationOutcome::Tie ||
            b.negotiated() == NegotiationOutcome::Tie;
    if (a.negotiated() == NegotiationOutcome::Sender) d.sender = &a;
    if (b.negotiated() == NegotiationOutcome::Sender && !d.sender) d.sender = &b;
    if (a.negotiated() == NegotiationOutcome::Receiver) d.receiver = &a;
    if (b.negotiated() == NegotiationOutcome::Receiver && !d.receiver) d.receiver = &b;
    return d;
}

// Everything the two parties received, stitched in leg order. Legs alternate
// receiver-first; a leg missing its clean delivery contributes the partial
// buffer of whoever was reading it and ends the stitch.
struct Received {
    BitString bits;
    bool complete = false;
};

Received stitch_received(const TrialDebrief& d, int legs) {
    Received r;
    const AttackParty* leg_receiver[2] = {d.receiver, d.sender};
    std::size_t taken[2] = {0, 0};
    for (int leg = 0; leg < legs; ++leg) {
        const AttackParty* p = leg_receiver[leg % 2];
        std::size_t& i = taken[leg % 2];
        if (p == nullptr) {
            return r;
        }
        if (i < p->delivered().size()) {
            r.bits.append(p->delivered()[i++]);
        } else {
            r.bits.append(p->state().recv_buffer);
            return r;
        }
    }
    r.complete = true;
    return r;
}

}  // namespace

TrialResult run_trial(const Scenario& scenario, int trial_index) {
    validate_scenario(scenario);
    const BitString message = resolve_message(scenario);
    const int legs = 1 + scenario.continuations;
    const int chunks =
        static_cast<int>(message.size()) / scenario.params.pkt_size;

    const std::uint64_t trial_seed = derive_seed(scenario.seed, trial_index + 1);
    EventQueue queue;
    Rng pool_rng(derive_seed(trial_seed, 1));
    Rng noise_rng(derive_seed(trial_seed, 2));

    const EffectiveConfig cfg = apply_defense(scenario);
    ResourcePool pool(queue, pool_rng, cfg.pool_limit, cfg.scope, scenario.drift,
                      scenario.feedback, cfg.per_site_cap);

    ProtocolParams params = scenario.params;
    params.pool_size = cfg.pool_belief;

    // A bystander in the senders' profile holding capacity for the whole
    // trial (never released).
    if (scenario.static_hold > 0) {
        const ContextId bystander{"bystander", scenario.sender_ctx.profile};
        pool.consume_batch(bystander, scenario.static_hold, 0, [](int) {});
    }

    const std::int64_t start = compute_start_time_ms(0, params, chunks);

    AttackParty a(queue, pool, scenario.sender_ctx, params, message, legs);
    AttackParty b(queue, pool, scenario.receiver_ctx, params, message, legs);
    a.arm(start, 0);
    b.arm(start, scenario.start_jitter_hops);

    // Background tabs stop arriving once the protocol window (plus slack) is
    // over; holds in flight still drain, so the queue always idles.
    const std::int64_t horizon =
        start + params.negotiate_ms +
        static_cast<std::int64_t>(
            std::llround(params.pulse_ms * ((chunks + 1) * legs + 1)));
    spawn_noise(queue, pool, cfg.noise, noise_rng, horizon,
                scenario.receiver_ctx.profile);

    bool dead = false;
    try {
        queue.run_until_idle(static_cast<std::uint64_t>(scenario.event_cap));
    } catch (const EventLimitExceeded&) {
        dead = true;  // runaway channel: garbage reads scheduling forever
    }

    TrialResult r;
    r.wait_ms = start;
    const std::int64_t negotiation_end = start + params.negotiate_ms;
    const int msg_len = static_cast<int>(message.size());
    const int plan_len = msg_len * legs;

    const TrialDebrief d = assign_roles(a, b);

    if (d.tie) {
        r.failure_kind = FailureKind::NegotiationTie;
        r.setup_ms = std::max<std::int64_t>(
            0, std::max(a.exit_ms(), b.exit_ms()) - start);
        r.total_ms = r.setup_ms + r.send_ms;
        return r;
    }
    if (dead || d.sender == nullptr || d.receiver == nullptr) {
        r.failure_kind = FailureKind::ChannelDead;
        r.setup_ms = params.negotiate_ms;
        r.total_ms = r.setup_ms + r.send_ms;
        return r;
    }

    const Received got = stitch_received(d, legs);
    BitString expected;
    for (int leg = 0; leg < legs; ++leg) {
        expected.append(message);
    }

    const bool exact = got.complete && got.bits == expected;
    const int matches = static_cast<int>(got.bits.matching_bits(expected));
    // Partial credit, clamped so `success <=> bits_correct == plan length`
    // stays exact even in the freak case of a correct prefix followed by
    // trailing garbage.
    r.bits_correct = exact ? plan_len : std::min(matches, std::max(0, plan_len - 1));
    r.success = exact;

    if (exact) {
        r.failure_kind = FailureKind::None;
        r.setup_ms = params.negotiate_ms;
        const std::int64_t send_done =
            std::max(a.send_done_ms(), b.send_done_ms());
        r.send_ms = std::max<std::int64_t>(0, send_done - negotiation_end);
    } else {
        const bool short_read =
            static_cast<int>(got.bits.size()) < plan_len || !got.complete;
        r.failure_kind =
            short_read ? FailureKind::EarlyTermination : FailureKind::CorruptedChunk;
        r.setup_ms = params.negotiate_ms;
        const std::int64_t end = std::max(
            {d.receiver->recv_done_ms(), d.receiver->exit_ms(), negotiation_end});
        r.send_ms = std::max<std::int64_t>(0, end - negotiation_end);
    }
    r.total_ms = r.setup_ms + r.send_ms;
    return r;
}

std::vector<TrialResult> run_all_trials_serial(const Scenario& scenario) {
    Scenario sc = scenario;
    sc.message = resolve_message(scenario);
    std::vector<TrialResult> results(static_cast<std::size_t>(sc.trials));
    for (int i = 0; i < sc.trials; ++i) {
        results[static_cast<std::size_t>(i)] = run_trial(sc, i);
    }
    return results;
}

std::vector<TrialResult> run_all_trials(const Scenario& scenario) {
    Scenario sc = scenario;
    sc.message = resolve_message(scenario);
    validate_scenario(sc);
    std::vector<TrialResult> results(static_cast<std::size_t>(sc.trials));
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < sc.trials; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = run_trial(sc, i);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return results;
}

ExperimentSummary summarize(const std::vector<TrialResult>& results,
                            int message_bits) {
    ExperimentSummary s;
    s.trials = static_cast<int>(results.size());
    s.message_bits = message_bits;
    for (FailureKind k :
         {FailureKind::None, FailureKind::NegotiationTie, FailureKind::CorruptedChunk,
          FailureKind::EarlyTermination, FailureKind::ChannelDead}) {
        s.failure_counts[k] = 0;
    }
    std::int64_t setup = 0, send = 0, total = 0;
    for (const TrialResult& r : results) {
        ++s.failure_counts[r.failure_kind];
        if (r.success) {
            ++s.successes;
            setup += r.setup_ms;
            send += r.send_ms;
            total += r.total_ms;
        }
    }
    if (s.trials > 0) {
        s.success_rate = static_cast<double>(s.successes) / s.trials;
    }
    if (s.successes > 0) {
        s.mean_setup_s = static_cast<double>(setup) / s.successes / 1000.0;
        s.mean_send_s = static_cast<double>(send) / s.successes / 1000.0;
        s.mean_total_s = static_cast<double>(total) / s.successes / 1000.0;
        if (s.mean_total_s > 0.0) {
            s.throughput_bits_per_s = message_bits / s.mean_total_s;
        }
    }
    return s;
}

ExperimentSummary run_trials(const Scenario& scenario) {
    const BitString message = resolve_message(scenario);
    return summarize(run_all_trials(scenario), static_cast<int>(message.size()));
}

double calibrate_drift(const BrowserPreset& preset, double target_success,
                       int trials, std::uint64_t seed) {
    if (!(target_success > 0.0 && target_success < 1.0)) {
        throw ValidationError("target success must lie strictly inside (0, 1)");
    }
    if (trials < 1) {
        throw ValidationError("calibration needs at least one trial");
    }
    Scenario sc = scenario_from_preset(preset);
    sc.trials = trials;
    sc.seed = seed;

    auto success_at = [&sc](double p) {
        Scenario probe = sc;
        probe.drift = DriftModel{p > 0.0, p};
        return run_trials(probe).success_rate;
    };

    // Success is monotone non-increasing in drift probability; bisection is
    // only meaningful if the endpoints bracket the target.
    const double at_zero = success_at(0.0);
    const double at_one = success_at(1.0);
    if (!(at_zero >= target_success && target_success >= at_one)) {
        throw CalibrationFailed("drift endpoints do not bracket the target rate");
    }

    double lo = 0.0, hi = 1.0, mid = 0.5;
    for (int iter = 0; iter < 20; ++iter) {
        mid = 0.5 * (lo + hi);
        const double observed = success_at(mid);
        if (std::abs(observed - target_success) <= 0.05) {
            return mid;
        }
        if (observed > target_success) {
            lo = mid;  // too successful: needs more drift
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<std::pair<Defense, ExperimentSummary>> evaluate_defenses(
    const Scenario& base_scenario) {
    if (base_scenario.defense.kind != DefenseKind::None) {
        throw ValidationError("defense evaluation starts from an undefended scenario");
    }
    std::vector<Defense> defenses = {
        Defense{},
        Defense{DefenseKind::PartitionBySite, 1.0, 1},
        Defense{DefenseKind::WidenPool, 100.0, 1},
        Defense{DefenseKind::HybridCap, 1.0,
                std::max(1, base_scenario.params.pool_size / 8)},
    };
    std::vector<std::pair<Defense, ExperimentSummary>> table;
    table.reserve(defenses.size());
    for (const Defense& defense : defenses) {
        Scenario sc = base_scenario;
        sc.defense = defense;
        table.emplace_back(defense, run_trials(sc));
    }
    return table;
}

std::vector<std::pair<double, ExperimentSummary>> sweep(
    const Scenario& scenario, const std::string& parameter,
    const std::vector<double>& values) {
    enum class Param { Pulse, Negotiate, ArrivalRate, DriftProb, TabCount };
    Param which;
    if (parameter == "pulse_interval" || parameter == "pulse_interval_s") {
        which = Param::Pulse;
    } else if (parameter == "negotiate_interval" ||
               parameter == "negotiate_interval_s") {
        which = Param::Negotiate;
    } else if (parameter == "arrival_rate" || parameter == "noise_rate_hz") {
        which = Param::ArrivalRate;
    } else if (parameter == "drift_probability" || parameter == "drift_prob") {
        which = Param::DriftProb;
    } else if (parameter == "tab_count" || parameter == "noise_tabs") {
        which = Param::TabCount;
    } else {
        throw UnknownParameter("unknown sweep parameter: " + parameter);
    }

    std::vector<std::pair<double, ExperimentSummary>> out;
    out.reserve(values.size());
    for (double v : values) {
        Scenario sc = scenario;
        switch (which) {
            case Param::Pulse:
                sc.params.pulse_ms = v * 1000.0;
                break;
            case Param::Negotiate:
                sc.params.negotiate_ms =
                    static_cast<std::int64_t>(std::llround(v * 1000.0));
                break;
            case Param::ArrivalRate:
                sc.noise.arrival_rate = v;
                break;
            case Param::DriftProb:
                sc.drift = DriftModel{v > 0.0, v};
                break;
            case Param::TabCount:
                sc.noise.tab_count = static_cast<int>(std::llround(v));
                break;
        }
        out.emplace_back(v, run_trials(sc));
    }
    return out;
}

}  // namespace poolparty
