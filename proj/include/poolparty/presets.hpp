#pragma once

#include <string>
#include <vector>

#include "poolparty/pool.hpp"

namespace poolparty {

// Resource pools a covert channel can ride on. WebSocket/SSE/WebWorker are
// the measured channels; DNS and proxy-connection pools are identified-but-
// untested vectors, included as configurable presets.
enum class PoolKind { WebSocket, Sse, WebWorker, Dns, ProxyConnection };

std::string pool_kind_name(PoolKind kind);

// A measured browser resource pool plus the protocol tuning that reproduces
// its published bandwidth: negotiate/pulse intervals are back-derived from
// per-browser setup/send times for a 35-bit, 7-chunk transfer.
struct BrowserPreset {
    std::string name;
    PoolKind pool_kind;
    int pool_size;
    PoolScope scope;
    double negotiate_interval_s;
    double pulse_interval_s;
    int pkt_size;
    std::string source;  // browser + version the numbers came from
};

const std::vector<BrowserPreset>& all_presets();

// Lookup by preset name; throws UnknownParameter when absent.
const BrowserPreset& find_preset(const std::string& name);

// Human-readable table: name, kind, size, scope, source.
std::string list_presets();

}  // namespace poolparty
