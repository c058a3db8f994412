#pragma once

#include <string>
#include <vector>

#include "poolparty/experiments.hpp"

namespace poolparty {

// Millisecond count rendered as seconds with exactly three decimals
// ("0.100"). Integer formatting end to end: no float rounding can make two
// runs disagree by a trailing digit.
std::string format_seconds_ms(std::int64_t ms);

// Per-trial CSV document, header included, one row per trial, "\n" line
// endings, trailing newline.
std::string trial_csv(const std::vector<TrialResult>& results);

// Aggregate summary as pretty-printed JSON with stable key order, trailing
// newline.
std::string summary_json(const ExperimentSummary& summary);

// Whole-file write; throws IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace poolparty
