#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qsync/accumulator.hpp"
#include "qsync/kinds.hpp"

namespace qsync {

struct FringeEstimate {
    double value = 0.0;   // sample mean of the products, in [-1, 1]
    double stderr_ = 0.0; // sqrt((1 - value^2)/k), floored at 1/k
    std::int64_t k = 0;
};

// Mean and standard error of one (cell, quadrature) fringe. Empty cell
// raises a coverage error.
FringeEstimate estimate_fringe(const FringeAccumulator& acc, std::size_t cell,
                               Quadrature q);

struct TimeDifferenceEstimate {
    std::size_t index = 0; // sequence j or party i
    double t_hat = 0.0;
    double stderr_ = 0.0;
    std::int64_t k = 0;
    bool clamped = false; // |E/V| exceeded 1 and was clamped to the boundary
};

// Fringe inversion. LINEARIZED: t_hat = -asin(E_sin/V)/omega, valid
// |omega T| < pi/2; its standard error reduces to exactly 1/(V omega
// sqrt(k)) at V = 1 for any operating point. TWO_QUADRATURE:
// t_hat = atan2(-E_sin/V, E_cos/V)/omega, valid |omega T| < pi.
TimeDifferenceEstimate invert_phase(const FringeEstimate& sine,
                                    const std::optional<FringeEstimate>& cosine,
                                    double visibility, double omega,
                                    EstimatorMode mode);

// sum_j (-1)^{f_i(j)} T_hat_j over all balanced sequences; estimates must
// cover every sequence index exactly once, in order.
double sequence_contrast(const std::vector<TimeDifferenceEstimate>& estimates,
                         int party, int n_parties);

// ((N-1)/N) * (1/C(N,N/2)) * sequence_contrast: with exact T_j this equals
// t_i - <t> identically.
double adjustment_from_estimates(
    const std::vector<TimeDifferenceEstimate>& estimates, int party,
    int n_parties);

// Quadratic error propagation through the adjustment sum; for equal
// delta_T = 1/(omega sqrt(k/C)) it reduces to (N-1)/(N omega sqrt(k)).
double propagate_adjustment_error(const std::vector<double>& delta_ts,
                                  int n_parties);

struct PartyAdjustment {
    int party = 0;
    double adjustment = 0.0;      // estimate of t_i - <t> or t_i - t_ref
    double analytic_stderr = 0.0; // nominal-k prediction
    // NaN until an experiment fills it in
    double true_adjustment = std::numeric_limits<double>::quiet_NaN();
};

struct AdjustmentReport {
    Protocol protocol = Protocol::GHZ;
    int n_parties = 0;
    std::uint64_t rounds = 0;      // k
    std::uint64_t qubits_used = 0; // Q
    bool relative_to_average = true;
    int reference_party = -1; // set when relative_to_average is false
    int clamp_count = 0;
    std::vector<PartyAdjustment> parties;
};

// Full GHZ pipeline over an accumulator: per-sequence inversion, Eq-style
// adjustment sum per party, analytic errors from the nominal per-cell k.
AdjustmentReport estimate_ghz_adjustments(const FringeAccumulator& acc,
                                          int n_parties, double omega,
                                          EstimatorMode mode);

// Pairs protocol: per-party offsets t_i - t_0 at visibility 1; analytic
// stderr 1/(omega sqrt(k)).
AdjustmentReport estimate_pairs_offsets(const FringeAccumulator& acc,
                                        double omega, EstimatorMode mode);

// Dicke protocol: visibility N/(2(N-1)); analytic stderr
// 2(N-1)/(N omega sqrt(k)).
AdjustmentReport estimate_dicke_offsets(const FringeAccumulator& acc,
                                        int n_parties, double omega,
                                        EstimatorMode mode);

// Shifts all adjustments so the standard party's becomes zero; pairwise
// differences are preserved. Stated errors keep their original meaning.
AdjustmentReport recenter_to_standard_clock(const AdjustmentReport& report,
                                            int standard_party);

// Synchronization accuracy 1/(omega dt)^2 per qubit budget Q:
//   GHZ   (N/(N-1))^2 Q/N
//   PAIRS (1/2)(N/(N-1)) Q/N
//   DICKE (1/4)(N/(N-1))^2 Q/N
// Q must be divisible by the protocol's per-round qubit cost.
double qubit_efficiency(Protocol protocol, int n_parties, std::uint64_t qubits);

std::string report_to_text(const AdjustmentReport& report);

} // namespace qsync
