#pragma once

#include <string>
#include <vector>

#include "qsync/experiments.hpp"

namespace qsync {

// results.csv: one row per (trial, party) plus rms/pooled summary rows.
// Fixed column order, '.' decimals, mandatory header; the timestamp
// comment line is dropped when with_timestamp is false.
std::string results_csv(const ExperimentConfig& config,
                        const std::vector<AdjustmentReport>& reports,
                        const TrialSummary& summary, bool with_timestamp);

// efficiency.csv: one row per (protocol, N).
std::string efficiency_csv(const std::vector<EfficiencyRow>& rows,
                           bool with_timestamp);

// Human-readable run summary.
std::string summary_text(const ExperimentConfig& config,
                         const TrialSummary& summary);

// Per-check validation table.
std::string validation_text(const ValidationReport& report);

void write_text_file(const std::string& path, const std::string& content);

} // namespace qsync
