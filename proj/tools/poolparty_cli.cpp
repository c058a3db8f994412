// Command-line front end: scenario-file driven covert-channel experiments
// emitting per-trial CSV and aggregate JSON.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poolparty/errors.hpp"
#include "poolparty/experiments.hpp"
#include "poolparty/presets.hpp"
#include "poolparty/report.hpp"
#include "poolparty/scenario_file.hpp"

namespace {

// Seed precedence: --seed flag, then POOLPARTY_SEED, then the scenario file.
void apply_seed_overrides(poolparty::Scenario& sc, bool flag_given,
                          std::uint64_t flag_seed) {
    if (flag_given) {
        sc.seed = flag_seed;
        return;
    }
    if (const char* env = std::getenv("POOLPARTY_SEED")) {
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(env, &pos);
            if (pos != std::string(env).size()) {
                throw std::invalid_argument(env);
            }
            sc.seed = v;
        } catch (const std::exception&) {
            throw poolparty::ValidationError(
                std::string("POOLPARTY_SEED is not an unsigned integer: ") + env);
        }
    }
}

std::string summary_row(const poolparty::ExperimentSummary& s) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.4f,%d,%d,%.3f,%.3f,%.3f,%.3f",
                  s.success_rate, s.successes, s.trials, s.mean_setup_s,
                  s.mean_send_s, s.mean_total_s, s.throughput_bits_per_s);
    return buf;
}

constexpr const char* kSummaryColumns =
    "success_rate,successes,trials,mean_setup_s,mean_send_s,mean_total_s,"
    "throughput_bits_per_s";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pool-party covert-channel simulator"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "run a scenario; write CSV + JSON");
    std::string scenario_path, out_path, summary_path;
    int trials_override = 0;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    run->add_option("--scenario", scenario_path, "scenario file (key=value)")
        ->required();
    run->add_option("--out", out_path, "per-trial CSV output path")->required();
    run->add_option("--summary", summary_path, "aggregate JSON output path")
        ->required();
    run->add_option("--trials", trials_override, "override trial count");
    run->add_option("--seed", seed_override, "override master seed");

    // --- presets ---
    auto* presets = app.add_subcommand("presets", "list browser presets");

    // --- sweep ---
    auto* sweep_cmd =
        app.add_subcommand("sweep", "summaries across one varied parameter");
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string sweep_scenario_path, sweep_out;
    sweep_cmd->add_option("--scenario", sweep_scenario_path, "base scenario file")
        ->required();
    sweep_cmd
        ->add_option("--param", sweep_param,
                     "pulse_interval_s | negotiate_interval_s | noise_rate_hz | "
                     "drift_prob | noise_tabs")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");

    // --- defenses ---
    auto* defenses_cmd = app.add_subcommand(
        "defenses", "evaluate all defenses against one scenario");
    std::string defenses_scenario_path, defenses_out;
    defenses_cmd
        ->add_option("--scenario", defenses_scenario_path, "base scenario file")
        ->required();
    defenses_cmd->add_option("--out", defenses_out,
                             "CSV output path (default stdout)");

    // --- calibrate ---
    auto* calibrate_cmd = app.add_subcommand(
        "calibrate", "bisect drift probability to a target success rate");
    std::string calibrate_preset;
    double calibrate_target = 0.0;
    int calibrate_trials = 100;
    std::uint64_t calibrate_seed = 0;
    bool calibrate_seed_given = false;
    calibrate_cmd->add_option("--preset", calibrate_preset, "preset name")
        ->required();
    calibrate_cmd
        ->add_option("--target", calibrate_target, "target success rate in (0,1)")
        ->required();
    calibrate_cmd->add_option("--trials", calibrate_trials,
                              "trials per bisection step");
    calibrate_cmd->add_option("--seed", calibrate_seed, "master seed");

    CLI11_PARSE(app, argc, argv);
    seed_given = run->count("--seed") > 0;
    calibrate_seed_given = calibrate_cmd->count("--seed") > 0;

    try {
        if (*run) {
            poolparty::Scenario sc = poolparty::parse_scenario(scenario_path);
            if (trials_override > 0) sc.trials = trials_override;
            apply_seed_overrides(sc, seed_given, seed_override);
            poolparty::validate_scenario(sc);
            const auto results = poolparty::run_all_trials(sc);
            const auto summary = poolparty::summarize(
                results, static_cast<int>(poolparty::resolve_message(sc).size()));
            poolparty::write_text_file(out_path, poolparty::trial_csv(results));
            poolparty::write_text_file(summary_path,
                                       poolparty::summary_json(summary));
        } else if (*presets) {
            std::cout << poolparty::list_presets();
        } else if (*sweep_cmd) {
            poolparty::Scenario sc =
                poolparty::parse_scenario(sweep_scenario_path);
            apply_seed_overrides(sc, false, 0);
            const auto rows = poolparty::sweep(sc, sweep_param, sweep_values);
            std::string csv = std::string("value,") + kSummaryColumns + "\n";
            for (const auto& [value, summary] : rows) {
                char head[64];
                std::snprintf(head, sizeof(head), "%.6g,", value);
                csv += head + summary_row(summary) + "\n";
            }
            if (sweep_out.empty()) {
                std::cout << csv;
            } else {
                poolparty::write_text_file(sweep_out, csv);
            }
        } else if (*defenses_cmd) {
            poolparty::Scenario sc =
                poolparty::parse_scenario(defenses_scenario_path);
            apply_seed_overrides(sc, false, 0);
            const auto rows = poolparty::evaluate_defenses(sc);
            std::string csv = std::string("defense,") + kSummaryColumns + "\n";
            for (const auto& [defense, summary] : rows) {
                csv += poolparty::defense_name(defense) + "," +
                       summary_row(summary) + "\n";
            }
            if (defenses_out.empty()) {
                std::cout << csv;
            } else {
                poolparty::write_text_file(defenses_out, csv);
            }
        } else if (*calibrate_cmd) {
            if (!calibrate_seed_given) {
                if (const char* env = std::getenv("POOLPARTY_SEED")) {
                    calibrate_seed = std::stoull(env);
                }
            }
            const double p = poolparty::calibrate_drift(
                poolparty::find_preset(calibrate_preset), calibrate_target,
                calibrate_trials, calibrate_seed);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "drift_probability=%.10g\n", p);
            std::cout << buf;
        }
    } catch (const poolparty::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
