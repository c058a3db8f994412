// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and budgets are pinned here, in code, on purpose:
//   1. bandwidth table of 8 presets within 1 virtual ms          (< 1 s)
//   2. 100% consistency on Chromium presets; calibrated drift
//      hits 0.71/0.73 within +/-0.10 on fresh seeds              (< 30 s)
//   3. codec round-trip w=1..10 + all 32 single-chunk sends      (< 5 s)
//   4. negotiation: 255-pool always splits 128/127; symmetric
//      even race reports NegotiationTie
//   5. cross-profile success iff the pool scope allows it
//   6. partition/cap kill the channel everywhere; widening under
//      noise never helps
//   7. noise monotonicity at 200 trials/point; static holds are
//      harmless down to effective pool = 2^pkt + 1
//   8. byte-identical CSV for identical scenario + seed

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "poolparty/experiments.hpp"
#include "poolparty/party.hpp"
#include "poolparty/report.hpp"

using namespace poolparty;

namespace {

int g_failures = 0;

struct Criterion {
    bool ok = true;
    std::string detail;  // first failure, or empty

    void expect(bool cond, const std::string& why) {
        if (!cond && detail.empty()) {
            ok = false;
            detail = why;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(int number, const char* title, const Criterion& c, double elapsed_s,
            double budget_s) {
    const bool in_budget = budget_s <= 0.0 || elapsed_s <= budget_s;
    if (c.ok && in_budget) {
        std::printf("criterion %d: PASS — %s (%.2f s)\n", number, title, elapsed_s);
        return;
    }
    ++g_failures;
    if (!c.ok) {
        std::printf("criterion %d: FAIL — %s: %s\n", number, title, c.detail.c_str());
    } else {
        std::printf("criterion %d: FAIL — %s: over budget (%.2f s > %.2f s)\n",
                    number, title, elapsed_s, budget_s);
    }
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a, b);
    return buf;
}

// --- criterion 1: bandwidth table --------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    struct Row {
        const char* preset;
        std::int64_t setup_ms, send_ms, total_ms;
    };
    const Row table[] = {
        {"chrome-ws", 100, 500, 600},    {"edge-ws", 100, 500, 600},
        {"firefox-ws", 2000, 5000, 7000}, {"tor-ws", 2000, 5000, 7000},
        {"brave-sse", 3000, 5000, 8000}, {"chrome-sse", 2000, 5000, 7000},
        {"edge-sse", 2000, 5000, 7000},  {"firefox-ww", 1500, 7500, 9000},
    };
    for (const Row& row : table) {
        Scenario sc = scenario_from_preset(row.preset);
        sc.seed = 2026;
        const TrialResult r = run_trial(sc, 0);
        c.expect(r.success, std::string(row.preset) + ": trial failed");
        c.expect(std::llabs(r.setup_ms - row.setup_ms) <= 1,
                 std::string(row.preset) + ": setup " + std::to_string(r.setup_ms) +
                     " ms, expected " + std::to_string(row.setup_ms));
        c.expect(std::llabs(r.send_ms - row.send_ms) <= 1,
                 std::string(row.preset) + ": send " + std::to_string(r.send_ms) +
                     " ms, expected " + std::to_string(row.send_ms));
        c.expect(std::llabs(r.total_ms - row.total_ms) <= 1,
                 std::string(row.preset) + ": total " + std::to_string(r.total_ms) +
                     " ms, expected " + std::to_string(row.total_ms));
    }
    report(1, "bandwidth table reproduced within 1 virtual ms", c,
           seconds_since(t0), 1.0);
}

// --- criterion 2: consistency + calibrated drift ------------------------

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    const char* chromium[] = {"chrome-ws",  "edge-ws",   "brave-ws",
                              "chrome-sse", "edge-sse",  "brave-sse",
                              "chromium-dns", "chromium-proxy"};
    int idx = 0;
    for (const char* name : chromium) {
        Scenario sc = scenario_from_preset(name);
        sc.trials = 100;
        sc.seed = 1000 + idx++;
        const ExperimentSummary s = run_trials(sc);
        c.expect(s.success_rate == 1.0,
                 std::string(name) + ": noiseless rate " +
                     fmt("%.2f (want exactly %.2f)", s.success_rate, 1.0));
    }

    const double p = calibrate_drift(find_preset("firefox-ws"), 0.71, 100, 9);
    c.expect(p > 0.0 && p < 1.0, "calibrated drift outside (0, 1)");

    Scenario ff = scenario_from_preset("firefox-ws");
    ff.trials = 100;
    ff.seed = 1234;  // fresh seed, disjoint from calibration
    ff.drift = DriftModel{p > 0.0, p};
    const double ff_rate = run_trials(ff).success_rate;
    c.expect(std::abs(ff_rate - 0.71) <= 0.10,
             "firefox-ws calibrated rate " + fmt("%.2f vs target %.2f", ff_rate, 0.71));

    Scenario tor = scenario_from_preset("tor-ws");
    tor.trials = 100;
    tor.seed = 999;
    tor.drift = DriftModel{p > 0.0, p};
    const double tor_rate = run_trials(tor).success_rate;
    c.expect(std::abs(tor_rate - 0.73) <= 0.10,
             "tor-ws calibrated rate " + fmt("%.2f vs target %.2f", tor_rate, 0.73));

    report(2, "consistency: 100% noiseless, calibrated drift on fresh seeds", c,
           seconds_since(t0), 30.0);
}

// --- criterion 3: codec oracle ------------------------------------------

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    for (int w = 1; w <= 10; ++w) {
        const std::uint64_t top = std::uint64_t{1} << w;
        for (std::uint64_t v = 0; v < top; ++v) {
            const Chunk chunk = int_to_chunk(v, w);
            c.expect(chunk.width() == w, "codec width mismatch");
            c.expect(chunk_to_int(chunk) == v,
                     "codec round-trip failed at w=" + std::to_string(w) +
                         " v=" + std::to_string(v));
        }
    }

    const ProtocolParams params{200, 5, 2000, 5000.0 / 7.0};
    for (std::uint64_t v = 0; v < 32; ++v) {
        EventQueue q;
        Rng rng(derive_seed(3000, v));
        ResourcePool pool(q, rng, 200, PoolScope::Profile);
        const BitString msg = int_to_chunk(v, 5).bits();
        AttackParty a(q, pool, {"site-a", "default"}, params, msg);
        AttackParty b(q, pool, {"site-b", "default"}, params, msg);
        a.arm(1000, 0);
        b.arm(1000, 1);
        q.run_until_idle();
        c.expect(b.delivered().size() == 1 && b.delivered()[0] == msg,
                 "single-chunk value " + std::to_string(v) + " not delivered");
    }

    report(3, "codec round-trip w=1..10 and all 32 single-chunk sends", c,
           seconds_since(t0), 5.0);
}

// --- criterion 4: negotiation -------------------------------------------

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    const ProtocolParams params{255, 5, 100, 500.0 / 7.0};
    const BitString msg = resolve_message([] {
        Scenario sc = scenario_from_preset("chrome-ws");
        sc.seed = 4;
        return sc;
    }());
    for (int i = 0; i < 100; ++i) {
        EventQueue q;
        Rng rng(derive_seed(4000, i));
        ResourcePool pool(q, rng, 255, PoolScope::Profile);
        AttackParty a(q, pool, {"site-a", "default"}, params, msg);
        AttackParty b(q, pool, {"site-b", "default"}, params, msg);
        a.arm(1000, 0);
        b.arm(1000, 1);  // default one-hop jitter
        q.run_until_idle();
        c.expect(a.negotiated() == NegotiationOutcome::Sender &&
                     b.negotiated() == NegotiationOutcome::Receiver,
                 "trial " + std::to_string(i) + ": roles not Sender/Receiver");
        c.expect(a.race_held() == 128 && b.race_held() == 127,
                 "trial " + std::to_string(i) + ": split " +
                     std::to_string(a.race_held()) + "/" +
                     std::to_string(b.race_held()) + ", expected 128/127");
    }

    Scenario even = scenario_from_preset("firefox-ws");  // 200-slot pool
    even.start_jitter_hops = 0;
    const TrialResult r = run_trial(even, 0);
    c.expect(r.failure_kind == FailureKind::NegotiationTie,
             "symmetric even race reported " + failure_kind_name(r.failure_kind) +
                 ", expected NegotiationTie");

    report(4, "negotiation: 128/127 splits and the symmetric tie", c,
           seconds_since(t0), 0.0);
}

// --- criterion 5: cross-profile scoping ----------------------------------

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    Scenario gecko = scenario_from_preset("gecko-ws");
    gecko.sender_ctx = {"site-a", "normal"};
    gecko.receiver_ctx = {"site-b", "private"};
    gecko.seed = 51;
    const TrialResult ok = run_trial(gecko, 0);
    c.expect(ok.success, "gecko-ws cross-profile trial failed");

    Scenario chrome = scenario_from_preset("chrome-ws");
    chrome.sender_ctx = {"site-a", "normal"};
    chrome.receiver_ctx = {"site-b", "private"};
    chrome.seed = 51;
    const TrialResult dead = run_trial(chrome, 0);
    c.expect(!dead.success && dead.failure_kind == FailureKind::ChannelDead,
             "chrome-ws cross-profile reported " +
                 failure_kind_name(dead.failure_kind) + ", expected ChannelDead");

    report(5, "cross-profile linkage is exactly a pool-scope property", c,
           seconds_since(t0), 0.0);
}

// --- criterion 6: defenses ------------------------------------------------

void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    for (const BrowserPreset& preset : all_presets()) {
        Scenario sc = scenario_from_preset(preset);
        sc.trials = 10;
        sc.seed = 61;
        sc.defense = Defense{DefenseKind::PartitionBySite, 1.0, 1};
        const ExperimentSummary s = run_trials(sc);
        c.expect(s.success_rate == 0.0,
                 std::string(preset.name) + ": partitioned rate " +
                     fmt("%.2f (want %.2f)", s.success_rate, 0.0));
    }

    for (const char* name : {"chrome-ws", "firefox-ws", "brave-sse"}) {
        Scenario sc = scenario_from_preset(name);
        sc.trials = 10;
        sc.seed = 62;
        sc.defense =
            Defense{DefenseKind::HybridCap, 1.0,
                    std::max(1, sc.params.pool_size / 8)};  // << pool/2
        const ExperimentSummary s = run_trials(sc);
        c.expect(s.success_rate == 0.0,
                 std::string(name) + ": capped rate " +
                     fmt("%.2f (want %.2f)", s.success_rate, 0.0));
    }

    Scenario noisy = scenario_from_preset("firefox-ws");
    noisy.trials = 30;
    noisy.seed = 63;
    noisy.noise.tab_count = 10;
    noisy.noise.arrival_rate = 0.5;
    const double baseline = run_trials(noisy).success_rate;
    Scenario widened = noisy;
    widened.defense = Defense{DefenseKind::WidenPool, 100.0, 1};
    const double widened_rate = run_trials(widened).success_rate;
    c.expect(widened_rate <= baseline,
             "widened rate " + fmt("%.2f above the noisy baseline %.2f",
                                   widened_rate, baseline));

    report(6, "partition and cap kill the channel; widening never helps", c,
           seconds_since(t0), 0.0);
}

// --- criterion 7: noise properties ----------------------------------------

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    Scenario sc = scenario_from_preset("firefox-ws");
    sc.trials = 200;
    sc.seed = 11;
    sc.noise.tab_count = 10;
    const auto points = sweep(sc, "arrival_rate", {0.0, 0.1, 1.0});
    const double r0 = points[0].second.success_rate;
    const double r1 = points[1].second.success_rate;
    const double r2 = points[2].second.success_rate;
    c.expect(r0 == 1.0, fmt("quiet-pool rate %.2f (want %.2f)", r0, 1.0));
    char chain[96];
    std::snprintf(chain, sizeof(chain), "%.2f -> %.2f -> %.2f", r0, r1, r2);
    c.expect(r0 >= r1 && r1 >= r2, std::string("rates not monotone: ") + chain);

    // Static holds: harmless down to effective pool == 2^pkt + 1 == 33.
    for (int held : {0, 50, 100, 150, 200, 222}) {
        Scenario hold = scenario_from_preset("chrome-ws");
        hold.pool_limit = 255;
        hold.static_hold = held;
        hold.params.pool_size = 255 - held;  // the parties' (accurate) probe
        hold.trials = 3;
        hold.seed = 70 + held;
        const ExperimentSummary s = run_trials(hold);
        c.expect(s.success_rate == 1.0,
                 "static hold " + std::to_string(held) + ": rate " +
                     fmt("%.2f (want %.2f)", s.success_rate, 1.0));
    }

    report(7, "noise monotonicity and static-hold neutrality", c,
           seconds_since(t0), 0.0);
}

// --- criterion 8: determinism ----------------------------------------------

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;

    Scenario sc = scenario_from_preset("firefox-ws");
    sc.trials = 20;
    sc.seed = 5;
    sc.noise.tab_count = 10;
    sc.noise.arrival_rate = 0.5;
    sc.drift = DriftModel{true, 0.001};

    const std::string csv_a = trial_csv(run_all_trials(sc));
    const std::string csv_b = trial_csv(run_all_trials(sc));
    c.expect(csv_a == csv_b, "CSV outputs differ between identical runs");

    const ExperimentSummary sum_a = summarize(run_all_trials(sc), 35);
    const ExperimentSummary sum_b = summarize(run_all_trials(sc), 35);
    c.expect(summary_json(sum_a) == summary_json(sum_b),
             "JSON summaries differ between identical runs");

    report(8, "byte-identical output for identical scenario and seed", c,
           seconds_since(t0), 0.0);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
