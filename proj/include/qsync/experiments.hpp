#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsync/estimation.hpp"
#include "qsync/kinds.hpp"
#include "qsync/protocol.hpp"

namespace qsync {

struct ExperimentConfig {
    Protocol protocol = Protocol::GHZ;
    int n_parties = 0;
    double omega = 1.0;
    std::vector<double> offsets;  // empty: redrawn per trial from the window
    double offset_window = 0.3;   // omega * max|t_i| in radians
    std::uint64_t rounds = 0;     // k per trial; pairs: rounds per party
    int trials = 0;
    std::uint64_t seed = 0;
    ScheduleMode schedule = ScheduleMode::ROUND_ROBIN;
    EstimatorMode estimator = EstimatorMode::LINEARIZED;
    double nominal_time = 0.0;
    int statevector_limit = kDefaultStatevectorLimit;
    GhzSamplerMode ghz_sampler = GhzSamplerMode::CLOSED_FORM;
    DickeSamplerMode dicke_sampler = DickeSamplerMode::AUTO;
};

// Throws ConfigError on anything monte_carlo would choke on: odd N,
// non-positive counts, round-robin indivisibility, offsets outside the
// estimator's inversion window, GHZ beyond full-coverage reach.
void validate_config(const ExperimentConfig& config);

// Quadrature schedule implied by the estimator mode.
QuadraturePolicy policy_for(EstimatorMode mode);

// Qubits one trial consumes.
std::uint64_t qubits_per_trial(const ExperimentConfig& config);

// One full protocol round-trip: draw offsets (unless fixed), run k rounds,
// estimate, attach truth. Pure function of (config, trial_index).
AdjustmentReport run_trial(const ExperimentConfig& config,
                           std::uint64_t trial_index);

struct PartyErrorStat {
    int party = 0;
    double rms = 0.0;
    double analytic = 0.0;
    double ratio = 0.0;
};

struct TrialSummary {
    std::vector<PartyErrorStat> parties; // reference party excluded
    double pooled_rms = 0.0;
    double pooled_analytic = 0.0;
    double pooled_ratio = 0.0;
    std::uint64_t clamp_total = 0;
    int trials = 0;
    std::uint64_t rounds = 0;
    std::uint64_t qubits_per_trial = 0;
    double wall_seconds = 0.0;
};

// Runs config.trials independent trials (optionally across threads; the
// result is thread-count independent) and aggregates RMS errors against
// the analytic prediction. Reports land in out_reports when given,
// indexed by trial.
TrialSummary monte_carlo(const ExperimentConfig& config, int threads = 1,
                         std::vector<AdjustmentReport>* out_reports = nullptr);

struct SweepConfig {
    std::vector<int> n_values;
    std::uint64_t qubit_budget = 0; // Q per trial, all protocols
    std::vector<Protocol> protocols;
    int trials = 0;
    std::uint64_t seed = 0;
    double omega = 1.0;
    double offset_window = 0.3;
};

struct EfficiencyRow {
    Protocol protocol = Protocol::GHZ;
    int n_parties = 0;
    std::uint64_t qubits = 0;
    std::uint64_t rounds = 0;
    double empirical_accuracy = 0.0; // 1/(omega * pooled_rms)^2
    double analytic_accuracy = 0.0;  // qubit_efficiency
    double ratio = 0.0;
};

// One Monte Carlo cell per (protocol, N) at a shared qubit budget.
std::vector<EfficiencyRow> efficiency_sweep(const SweepConfig& sweep,
                                            int threads = 1);

struct ValidationCheck {
    std::string name;
    double max_deviation = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass = false;
};

// Exact cross-checks of every sampler against the statevector oracle and
// the closed-form laws. visibility_perturbation deliberately corrupts the
// analytic visibility used by the checks (fault injection for testing the
// failure path); 0 for real validation.
ValidationReport validate_samplers(double visibility_perturbation = 0.0);

} // namespace qsync
