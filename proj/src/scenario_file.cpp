#include "poolparty/scenario_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "poolparty/errors.hpp"

namespace poolparty {

namespace {

const char* const kKnownKeys[] = {
    "preset",          "pool_size",        "pkt_size",
    "pool_scope",      "negotiate_interval_s", "pulse_interval_s",
    "message_bits",    "trials",           "seed",
    "defense",         "defense_param",    "drift_prob",
    "feedback_delay_max_ms", "noise_tabs", "noise_api_prob",
    "noise_rate_hz",   "noise_hold_s",     "sender_site",
    "sender_profile",  "receiver_site",    "receiver_profile",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& reason) {
    throw ParseError("line " + std::to_string(line) + ": " + reason);
}

long long parse_int(const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) fail(line, "trailing characters in number: " + value);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "not an integer: " + value);
    }
}

std::uint64_t parse_u64(const std::string& value, int line) {
    // stoull silently wraps negative input; reject it up front.
    if (!value.empty() && value[0] == '-') {
        fail(line, "not an unsigned integer: " + value);
    }
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) fail(line, "trailing characters in number: " + value);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "not an unsigned integer: " + value);
    }
}

double parse_double(const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) fail(line, "trailing characters in number: " + value);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "not a number: " + value);
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    // First pass: collect key=value pairs, rejecting unknowns + repeats.
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key)) fail(line_no, "unknown key: " + key);
        if (entries.count(key)) fail(line_no, "repeated key: " + key);
        if (value.empty()) fail(line_no, "empty value for key: " + key);
        entries.emplace(key, std::make_pair(value, line_no));
    }

    // Second pass: preset defaults first, explicit keys override.
    Scenario sc;
    sc.params.negotiate_ms = 2000;
    sc.params.pulse_ms = 5000.0 / 7;
    if (const auto it = entries.find("preset"); it != entries.end()) {
        try {
            sc = scenario_from_preset(it->second.first);
        } catch (const UnknownParameter& e) {
            fail(it->second.second, e.what());
        }
    }

    bool explicit_message_bits = false;
    for (const auto& [key, entry] : entries) {
        const std::string& value = entry.first;
        const int at = entry.second;
        if (key == "preset") {
            continue;
        } else if (key == "pool_size") {
            sc.params.pool_size = static_cast<int>(parse_int(value, at));
        } else if (key == "pkt_size") {
            sc.params.pkt_size = static_cast<int>(parse_int(value, at));
        } else if (key == "pool_scope") {
            const auto scope = pool_scope_from_name(value);
            if (!scope) fail(at, "unknown pool scope: " + value);
            sc.scope = *scope;
        } else if (key == "negotiate_interval_s") {
            sc.params.negotiate_ms = static_cast<std::int64_t>(
                std::llround(parse_double(value, at) * 1000.0));
        } else if (key == "pulse_interval_s") {
            sc.params.pulse_ms = parse_double(value, at) * 1000.0;
        } else if (key == "message_bits") {
            sc.message_bits = static_cast<int>(parse_int(value, at));
            explicit_message_bits = true;
        } else if (key == "trials") {
            sc.trials = static_cast<int>(parse_int(value, at));
        } else if (key == "seed") {
            sc.seed = parse_u64(value, at);
        } else if (key == "defense") {
            if (value == "none") {
                sc.defense.kind = DefenseKind::None;
            } else if (value == "partition_site") {
                sc.defense.kind = DefenseKind::PartitionBySite;
            } else if (value == "widen_pool") {
                sc.defense.kind = DefenseKind::WidenPool;
            } else if (value == "hybrid_cap") {
                sc.defense.kind = DefenseKind::HybridCap;
            } else {
                fail(at, "unknown defense: " + value);
            }
        } else if (key == "defense_param") {
            const double v = parse_double(value, at);
            sc.defense.widen_factor = v;
            sc.defense.per_site_limit = static_cast<int>(std::llround(v));
        } else if (key == "drift_prob") {
            const double p = parse_double(value, at);
            sc.drift = DriftModel{p > 0.0, p};
        } else if (key == "feedback_delay_max_ms") {
            sc.feedback.max_delay_ms = parse_int(value, at);
        } else if (key == "noise_tabs") {
            sc.noise.tab_count = static_cast<int>(parse_int(value, at));
        } else if (key == "noise_api_prob") {
            sc.noise.api_use_probability = parse_double(value, at);
        } else if (key == "noise_rate_hz") {
            sc.noise.arrival_rate = parse_double(value, at);
        } else if (key == "noise_hold_s") {
            sc.noise.hold_mean_s = parse_double(value, at);
        } else if (key == "sender_site") {
            sc.sender_ctx.site = value;
        } else if (key == "sender_profile") {
            sc.sender_ctx.profile = value;
        } else if (key == "receiver_site") {
            sc.receiver_ctx.site = value;
        } else if (key == "receiver_profile") {
            sc.receiver_ctx.profile = value;
        }
    }

    // Defense parameters come with usable defaults so `defense=widen_pool`
    // alone means the canonical evaluation.
    if (!entries.count("defense_param")) {
        sc.defense.widen_factor = 100.0;
        sc.defense.per_site_limit = std::max(1, sc.params.pool_size / 8);
    } else if (sc.defense.kind == DefenseKind::None) {
        throw ValidationError("defense_param given without a defense");
    }

    if (!explicit_message_bits) {
        sc.message_bits = 7 * sc.params.pkt_size;  // one seven-chunk plan
    }

    validate_scenario(sc);
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

}  // namespace poolparty
