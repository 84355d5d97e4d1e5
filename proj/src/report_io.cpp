#include "qsync/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "qsync/errors.hpp"

namespace qsync {
namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string timestamp_line() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[40];
    std::strftime(buf, sizeof buf, "# generated %Y-%m-%dT%H:%M:%SZ\n", &utc);
    return buf;
}

} // namespace

std::string results_csv(const ExperimentConfig& config,
                        const std::vector<AdjustmentReport>& reports,
                        const TrialSummary& summary, bool with_timestamp) {
    std::string out;
    if (with_timestamp) out += timestamp_line();
    out += "kind,protocol,n,trial,party,estimate,truth,error,analytic_stderr,"
           "ratio\n";
    const std::string proto = to_string(config.protocol);
    const std::string n = std::to_string(config.n_parties);
    for (std::size_t trial = 0; trial < reports.size(); ++trial) {
        for (const auto& p : reports[trial].parties) {
            const double err = p.adjustment - p.true_adjustment;
            out += "sample," + proto + "," + n + "," + std::to_string(trial) +
                   "," + std::to_string(p.party) + "," + fmt(p.adjustment) +
                   "," + fmt(p.true_adjustment) + "," + fmt(err) + "," +
                   fmt(p.analytic_stderr) + "," + fmt(err / p.analytic_stderr) +
                   "\n";
        }
    }
    for (const auto& stat : summary.parties) {
        out += "rms," + proto + "," + n + ",," + std::to_string(stat.party) +
               "," + fmt(stat.rms) + ",,," + fmt(stat.analytic) + "," +
               fmt(stat.ratio) + "\n";
    }
    out += "pooled," + proto + "," + n + ",,," + fmt(summary.pooled_rms) +
           ",,," + fmt(summary.pooled_analytic) + "," +
           fmt(summary.pooled_ratio) + "\n";
    return out;
}

std::string efficiency_csv(const std::vector<EfficiencyRow>& rows,
                           bool with_timestamp) {
    std::string out;
    if (with_timestamp) out += timestamp_line();
    out += "protocol,n,qubits,rounds,empirical_accuracy,analytic_accuracy,"
           "ratio\n";
    for (const auto& row : rows) {
        out += to_string(row.protocol) + "," + std::to_string(row.n_parties) +
               "," + std::to_string(row.qubits) + "," +
               std::to_string(row.rounds) + "," + fmt(row.empirical_accuracy) +
               "," + fmt(row.analytic_accuracy) + "," + fmt(row.ratio) + "\n";
    }
    return out;
}

std::string summary_text(const ExperimentConfig& config,
                         const TrialSummary& summary) {
    char buf[256];
    std::string out = "protocol " + to_string(config.protocol) + "  n " +
                      std::to_string(config.n_parties) + "  omega " +
                      fmt(config.omega) + "\n";
    std::snprintf(buf, sizeof buf,
                  "k %llu  trials %d  qubits/trial %llu  seed %llu\n",
                  static_cast<unsigned long long>(summary.rounds),
                  summary.trials,
                  static_cast<unsigned long long>(summary.qubits_per_trial),
                  static_cast<unsigned long long>(config.seed));
    out += buf;
    out += "estimator " + to_string(config.estimator) + "  schedule " +
           to_string(config.schedule) + "\n";
    for (const auto& p : summary.parties) {
        std::snprintf(buf, sizeof buf,
                      "party %d  rms %.6e  analytic %.6e  ratio %.4f\n",
                      p.party, p.rms, p.analytic, p.ratio);
        out += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "pooled rms %.6e  analytic %.6e  ratio %.4f\n",
                  summary.pooled_rms, summary.pooled_analytic,
                  summary.pooled_ratio);
    out += buf;
    std::snprintf(buf, sizeof buf, "clamped inversions %llu  wall %.2fs\n",
                  static_cast<unsigned long long>(summary.clamp_total),
                  summary.wall_seconds);
    out += buf;
    return out;
}

std::string validation_text(const ValidationReport& report) {
    std::string out;
    char buf[160];
    for (const auto& check : report.checks) {
        std::snprintf(buf, sizeof buf, "%-36s max dev %.3e  limit %.1e  %s\n",
                      check.name.c_str(), check.max_deviation, check.threshold,
                      check.pass ? "pass" : "FAIL");
        out += buf;
    }
    out += report.all_pass ? "all sampler checks passed\n"
                           : "SAMPLER VALIDATION FAILED\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) {
            throw Error("cannot create directory " + p.parent_path().string() +
                        ": " + ec.message());
        }
    }
    std::ofstream stream(p, std::ios::binary | std::ios::trunc);
    if (!stream) throw Error("cannot open " + path + " for writing");
    stream << content;
    if (!stream) throw Error("short write to " + path);
}

} // namespace qsync
