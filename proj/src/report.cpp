#include "poolparty/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "poolparty/errors.hpp"

namespace poolparty {

std::string format_seconds_ms(std::int64_t ms) {
    const char* sign = ms < 0 ? "-" : "";
    const std::int64_t mag = ms < 0 ? -ms : ms;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", sign,
                  static_cast<long long>(mag / 1000),
                  static_cast<long long>(mag % 1000));
    return buf;
}

std::string trial_csv(const std::vector<TrialResult>& results) {
    std::string out = "trial,success,setup_s,send_s,total_s,bits_correct,failure_kind\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const TrialResult& r = results[i];
        out += std::to_string(i);
        out += r.success ? ",1," : ",0,";
        out += format_seconds_ms(r.setup_ms);
        out += ',';
        out += format_seconds_ms(r.send_ms);
        out += ',';
        out += format_seconds_ms(r.total_ms);
        out += ',';
        out += std::to_string(r.bits_correct);
        out += ',';
        out += failure_kind_name(r.failure_kind);
        out += '\n';
    }
    return out;
}

std::string summary_json(const ExperimentSummary& summary) {
    nlohmann::ordered_json j;
    j["trials"] = summary.trials;
    j["successes"] = summary.successes;
    j["success_rate"] = summary.success_rate;
    j["mean_setup_s"] = summary.mean_setup_s;
    j["mean_send_s"] = summary.mean_send_s;
    j["mean_total_s"] = summary.mean_total_s;
    j["throughput_bits_per_s"] = summary.throughput_bits_per_s;
    j["message_bits"] = summary.message_bits;
    nlohmann::ordered_json failures;
    for (const auto& [kind, count] : summary.failure_counts) {
        failures[failure_kind_name(kind)] = count;
    }
    j["failure_counts"] = failures;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

}  // namespace poolparty
