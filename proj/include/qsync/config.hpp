#pragma once

#include <string>

#include "qsync/experiments.hpp"

namespace qsync {

// Flat key = value text, one pair per line, '#' starts a comment, keys
// snake_case, lists whitespace-separated. Grammar and key table are in the
// README. Errors carry the offending line number or key name.

// Run configuration: requires protocol, n, k, trials, seed; fills the
// documented defaults and validates via validate_config.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Sweep configuration: requires sweep_n, sweep_q, trials, seed; protocol
// list defaults to all three.
SweepConfig parse_sweep_config(const std::string& path);
SweepConfig parse_sweep_config_text(const std::string& text);

} // namespace qsync
