#pragma once

#include <string>

#include "poolparty/experiments.hpp"

namespace poolparty {

// Parse a flat key=value scenario description. Blank lines and #-comments
// are skipped; a `preset=` line loads that preset's defaults and any other
// key overrides them. Unknown and repeated keys are parse errors (no silent
// typo acceptance); violated protocol invariants surface as ValidationError.
Scenario parse_scenario_text(const std::string& text);

// Same, reading from a file; throws IoError when unreadable.
Scenario parse_scenario(const std::string& path);

}  // namespace poolparty
