#include "poolparty/presets.hpp"

#include <cstdio>

#include "poolparty/errors.hpp"

namespace poolparty {

std::string pool_kind_name(PoolKind kind) {
    switch (kind) {
        case PoolKind::WebSocket: return "WebSocket";
        case PoolKind::Sse: return "SSE";
        case PoolKind::WebWorker: return "WebWorker";
        case PoolKind::Dns: return "DNS";
        case PoolKind::ProxyConnection: return "ProxyConnection";
    }
    return "?";
}

const std::vector<BrowserPreset>& all_presets() {
    // Pulse intervals are seconds-per-chunk of the measured send times: a
    // 35-bit string is 7 five-bit chunks, so e.g. a 0.5 s send is 0.5/7 s
    // per pulse. Two-bit pools (safari-sse, webkitgtk-dns) keep the family
    // timing; their send time scales with their longer chunk plans.
    static const std::vector<BrowserPreset> presets = {
        // Measured channels (bandwidth-table rows).
        {"chrome-ws", PoolKind::WebSocket, 255, PoolScope::Profile,
         0.1, 0.5 / 7, 5, "Chrome 105 (Chromium)"},
        {"edge-ws", PoolKind::WebSocket, 255, PoolScope::Profile,
         0.1, 0.5 / 7, 5, "Edge 106 (Chromium)"},
        {"firefox-ws", PoolKind::WebSocket, 200, PoolScope::Application,
         2.0, 5.0 / 7, 5, "Firefox 105 (Gecko); cross-profile pool"},
        {"tor-ws", PoolKind::WebSocket, 200, PoolScope::Profile,
         2.0, 5.0 / 7, 5, "Tor Browser 11.5 (Gecko)"},
        {"brave-sse", PoolKind::Sse, 1350, PoolScope::Profile,
         3.0, 5.0 / 7, 5, "Brave 1.44 (Chromium)"},
        {"chrome-sse", PoolKind::Sse, 1350, PoolScope::Profile,
         2.0, 5.0 / 7, 5, "Chrome 105 (Chromium)"},
        {"edge-sse", PoolKind::Sse, 1350, PoolScope::Profile,
         2.0, 5.0 / 7, 5, "Edge 106 (Chromium)"},
        {"firefox-ww", PoolKind::WebWorker, 512, PoolScope::Profile,
         1.5, 7.5 / 7, 5, "Firefox 105 (Gecko)"},

        // Same Gecko WebSocket pool under its defining property: one pool
        // across profiles, so private and normal windows can collude.
        {"gecko-ws", PoolKind::WebSocket, 200, PoolScope::Application,
         2.0, 5.0 / 7, 5, "Gecko engine (Firefox/Tor); cross-profile pool"},

        // Pools fixed upstream before publication, kept for study.
        {"brave-ws", PoolKind::WebSocket, 255, PoolScope::Profile,
         0.1, 0.5 / 7, 5, "Brave 1.44 (Chromium); since fixed"},
        {"safari-sse", PoolKind::Sse, 6, PoolScope::Profile,
         2.0, 5.0 / 7, 2, "Safari 15.2 (WebKit); since fixed"},

        // Identified-but-untested vectors; global OS-facing pools.
        {"chromium-dns", PoolKind::Dns, 64, PoolScope::Application,
         2.0, 5.0 / 7, 5, "Chromium DNS resolver; untested vector"},
        {"chromium-proxy", PoolKind::ProxyConnection, 32, PoolScope::Application,
         2.0, 5.0 / 7, 4, "Chromium HTTP-proxy sockets; untested vector"},
        {"webkitgtk-dns", PoolKind::Dns, 8, PoolScope::Application,
         2.0, 5.0 / 7, 2, "WebKitGTK DNS resolver; untested vector"},
    };
    return presets;
}

const BrowserPreset& find_preset(const std::string& name) {
    for (const BrowserPreset& preset : all_presets()) {
        if (preset.name == name) {
            return preset;
        }
    }
    throw UnknownParameter("unknown preset: " + name);
}

std::string list_presets() {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-15s %-15s %6s  %-12s %s\n", "name",
                  "kind", "size", "scope", "source");
    out += line;
    for (const BrowserPreset& p : all_presets()) {
        std::snprintf(line, sizeof(line), "%-15s %-15s %6d  %-12s %s\n",
                      p.name.c_str(), pool_kind_name(p.pool_kind).c_str(),
                      p.pool_size, pool_scope_name(p.scope), p.source.c_str());
        out += line;
    }
    return out;
}

}  // namespace poolparty
