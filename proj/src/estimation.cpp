#include "qsync/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "qsync/errors.hpp"
#include "qsync/sequences.hpp"

namespace qsync {
namespace {

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

void check_party(int party, int n_parties, const char* who) {
    if (party < 0 || party >= n_parties) {
        throw DimensionError(std::string(who) + ": unknown party " +
                             std::to_string(party));
    }
}

// Estimates must cover sequence indices 0..C-1 in order.
void check_full_coverage(const std::vector<TimeDifferenceEstimate>& estimates,
                         std::uint64_t expected, const char* who) {
    if (estimates.size() != expected) {
        throw CoverageError(std::string(who) + ": " +
                            std::to_string(estimates.size()) +
                            " estimates for " + std::to_string(expected) +
                            " sequences");
    }
    for (std::size_t j = 0; j < estimates.size(); ++j) {
        if (estimates[j].index != j) {
            throw CoverageError(std::string(who) + ": estimate " +
                                std::to_string(j) + " carries index " +
                                std::to_string(estimates[j].index));
        }
    }
}

// Shared pairs/Dicke path; they differ only in visibility and labels.
AdjustmentReport estimate_central_offsets(const FringeAccumulator& acc,
                                          int n_parties, double omega,
                                          double visibility,
                                          EstimatorMode mode,
                                          Protocol protocol,
                                          std::uint64_t qubits_per_round) {
    if (acc.num_cells() != static_cast<std::size_t>(n_parties)) {
        throw DimensionError("accumulator has " +
                             std::to_string(acc.num_cells()) +
                             " cells for " + std::to_string(n_parties) +
                             " parties");
    }
    AdjustmentReport report;
    report.protocol = protocol;
    report.n_parties = n_parties;
    report.relative_to_average = false;
    report.reference_party = 0;

    std::int64_t rounds = -1;
    for (int party = 1; party < n_parties; ++party) {
        const FringeEstimate sine =
            estimate_fringe(acc, static_cast<std::size_t>(party), Quadrature::SINE);
        std::optional<FringeEstimate> cosine;
        if (mode == EstimatorMode::TWO_QUADRATURE) {
            cosine = estimate_fringe(acc, static_cast<std::size_t>(party),
                                     Quadrature::COSINE);
        }
        TimeDifferenceEstimate est =
            invert_phase(sine, cosine, visibility, omega, mode);
        est.index = static_cast<std::size_t>(party);

        const std::int64_t party_rounds =
            sine.k + (cosine ? cosine->k : 0);
        if (rounds < 0) rounds = party_rounds;
        if (party_rounds != rounds) {
            throw CoverageError("unequal round counts across parties: " +
                                std::to_string(party_rounds) + " vs " +
                                std::to_string(rounds));
        }

        PartyAdjustment adj;
        adj.party = party;
        adj.adjustment = est.t_hat;
        adj.analytic_stderr =
            1.0 / (visibility * omega * std::sqrt(static_cast<double>(sine.k)));
        adj.true_adjustment = std::numeric_limits<double>::quiet_NaN();
        report.parties.push_back(adj);
        if (est.clamped) ++report.clamp_count;
    }
    report.rounds = static_cast<std::uint64_t>(rounds);
    report.qubits_used = report.rounds * qubits_per_round;
    return report;
}

} // namespace

FringeEstimate estimate_fringe(const FringeAccumulator& acc, std::size_t cell,
                               Quadrature q) {
    const std::int64_t k = acc.count(cell, q);
    if (k < 1) {
        throw CoverageError("no rounds recorded for cell " +
                            std::to_string(cell) + " quadrature " +
                            to_string(q));
    }
    FringeEstimate est;
    est.k = k;
    est.value = static_cast<double>(acc.sum(cell, q)) / static_cast<double>(k);
    const double kd = static_cast<double>(k);
    est.stderr_ =
        std::max(std::sqrt((1.0 - est.value * est.value) / kd), 1.0 / kd);
    return est;
}

TimeDifferenceEstimate invert_phase(const FringeEstimate& sine,
                                    const std::optional<FringeEstimate>& cosine,
                                    double visibility, double omega,
                                    EstimatorMode mode) {
    if (!(visibility > 0.0) || visibility > 1.0) {
        throw DimensionError("visibility must lie in (0, 1], got " +
                             std::to_string(visibility));
    }
    if (!(omega > 0.0)) throw DimensionError("omega must be positive");

    TimeDifferenceEstimate est;
    est.k = sine.k;
    const double kd = static_cast<double>(sine.k);
    const double u_raw = sine.value / visibility;
    const double u = clamp_unit(u_raw);
    est.clamped = u != u_raw;

    if (mode == EstimatorMode::LINEARIZED) {
        // T = -asin(E_sin/V)/omega. The asin Jacobian exactly cancels the
        // binomial variance shrink at V = 1, leaving 1/(omega sqrt(k))
        // at every operating point; both floors keep that form at |E| = V.
        est.t_hat = -std::asin(u) / omega;
        const double denom = std::sqrt(std::max(1.0 - u * u, 1.0 / kd));
        est.stderr_ = sine.stderr_ / (visibility * omega * denom);
        return est;
    }

    if (!cosine) {
        throw CoverageError("two-quadrature inversion needs a cosine cell");
    }
    const double c_raw = cosine->value / visibility;
    const double c = clamp_unit(c_raw);
    est.clamped = est.clamped || c != c_raw;
    est.k = std::min(sine.k, cosine->k);

    est.t_hat = std::atan2(-u, c) / omega;
    // Delta method through atan2(-s, c); radius floored like the k floor
    // above so a degenerate (0, 0) cell cannot blow up.
    const double r2 = std::max(u * u + c * c, 1.0 / kd);
    const double sigma_s = sine.stderr_ / visibility;
    const double sigma_c = cosine->stderr_ / visibility;
    est.stderr_ = std::sqrt(c * c * sigma_s * sigma_s + u * u * sigma_c * sigma_c) /
                  (omega * r2);
    return est;
}

double sequence_contrast(const std::vector<TimeDifferenceEstimate>& estimates,
                         int party, int n_parties) {
    check_party(party, n_parties, "sequence_contrast");
    check_full_coverage(estimates, binomial(n_parties, n_parties / 2),
                        "sequence_contrast");
    const auto sequences = enumerate_sequences(n_parties);
    double contrast = 0.0;
    for (std::size_t j = 0; j < sequences.size(); ++j) {
        const double sign = sequences[j].flags[party] ? -1.0 : 1.0;
        contrast += sign * estimates[j].t_hat;
    }
    return contrast;
}

double adjustment_from_estimates(
    const std::vector<TimeDifferenceEstimate>& estimates, int party,
    int n_parties) {
    const double c =
        static_cast<double>(binomial(n_parties, n_parties / 2));
    const double scale = (n_parties - 1.0) / n_parties / c;
    return scale * sequence_contrast(estimates, party, n_parties);
}

double propagate_adjustment_error(const std::vector<double>& delta_ts,
                                  int n_parties) {
    const std::uint64_t c_exact = binomial(n_parties, n_parties / 2);
    if (delta_ts.size() != c_exact) {
        throw CoverageError("propagate_adjustment_error: " +
                            std::to_string(delta_ts.size()) +
                            " errors for " + std::to_string(c_exact) +
                            " sequences");
    }
    double quad = 0.0;
    for (double d : delta_ts) quad += d * d;
    const double scale =
        (n_parties - 1.0) / n_parties / static_cast<double>(c_exact);
    return scale * std::sqrt(quad);
}

AdjustmentReport estimate_ghz_adjustments(const FringeAccumulator& acc,
                                          int n_parties, double omega,
                                          EstimatorMode mode) {
    const std::uint64_t c = binomial(n_parties, n_parties / 2);
    if (acc.num_cells() != c) {
        throw DimensionError("accumulator has " + std::to_string(acc.num_cells()) +
                             " cells, expected C(N, N/2) = " + std::to_string(c));
    }

    std::vector<TimeDifferenceEstimate> estimates;
    std::vector<double> nominal_dt; // analytic per-sequence errors
    estimates.reserve(c);
    int clamps = 0;
    std::uint64_t rounds = 0;
    for (std::size_t j = 0; j < c; ++j) {
        const FringeEstimate sine = estimate_fringe(acc, j, Quadrature::SINE);
        std::optional<FringeEstimate> cosine;
        if (mode == EstimatorMode::TWO_QUADRATURE) {
            cosine = estimate_fringe(acc, j, Quadrature::COSINE);
        }
        TimeDifferenceEstimate est = invert_phase(sine, cosine, 1.0, omega, mode);
        est.index = j;
        if (est.clamped) ++clamps;
        rounds += static_cast<std::uint64_t>(sine.k + (cosine ? cosine->k : 0));
        nominal_dt.push_back(1.0 / (omega * std::sqrt(static_cast<double>(sine.k))));
        estimates.push_back(est);
    }

    AdjustmentReport report;
    report.protocol = Protocol::GHZ;
    report.n_parties = n_parties;
    report.relative_to_average = true;
    report.reference_party = -1;
    report.clamp_count = clamps;
    report.rounds = rounds;
    report.qubits_used = rounds * static_cast<std::uint64_t>(n_parties);

    const double analytic = propagate_adjustment_error(nominal_dt, n_parties);
    for (int party = 0; party < n_parties; ++party) {
        PartyAdjustment adj;
        adj.party = party;
        adj.adjustment = adjustment_from_estimates(estimates, party, n_parties);
        adj.analytic_stderr = analytic;
        adj.true_adjustment = std::numeric_limits<double>::quiet_NaN();
        report.parties.push_back(adj);
    }
    return report;
}

AdjustmentReport estimate_pairs_offsets(const FringeAccumulator& acc,
                                        double omega, EstimatorMode mode) {
    const int n_parties = static_cast<int>(acc.num_cells());
    // one logical round distributes a pair to every party: 2(N-1) qubits
    return estimate_central_offsets(
        acc, n_parties, omega, 1.0, mode, Protocol::PAIRS,
        2 * static_cast<std::uint64_t>(n_parties - 1));
}

AdjustmentReport estimate_dicke_offsets(const FringeAccumulator& acc,
                                        int n_parties, double omega,
                                        EstimatorMode mode) {
    if (n_parties < 2 || n_parties % 2 != 0) {
        throw InvalidEnsembleError("estimate_dicke_offsets: N must be even");
    }
    const double visibility =
        static_cast<double>(n_parties) / (2.0 * (n_parties - 1));
    return estimate_central_offsets(acc, n_parties, omega, visibility, mode,
                                    Protocol::DICKE,
                                    static_cast<std::uint64_t>(n_parties));
}

AdjustmentReport recenter_to_standard_clock(const AdjustmentReport& report,
                                            int standard_party) {
    const auto it = std::find_if(
        report.parties.begin(), report.parties.end(),
        [&](const PartyAdjustment& p) { return p.party == standard_party; });
    if (it == report.parties.end()) {
        throw DimensionError("recenter_to_standard_clock: unknown party " +
                             std::to_string(standard_party));
    }
    AdjustmentReport out = report;
    const double shift = it->adjustment;
    const double true_shift = it->true_adjustment;
    for (auto& p : out.parties) {
        p.adjustment -= shift;
        p.true_adjustment -= true_shift; // NaN stays NaN
    }
    out.relative_to_average = false;
    out.reference_party = standard_party;
    return out;
}

double qubit_efficiency(Protocol protocol, int n_parties, std::uint64_t qubits) {
    if (n_parties < 2 || n_parties % 2 != 0) {
        throw InvalidEnsembleError("qubit_efficiency: N must be even and >= 2");
    }
    if (qubits == 0) throw ScheduleError("qubit_efficiency: Q must be positive");
    const double n = n_parties;
    const double ratio = n / (n - 1.0);
    const double per_party = static_cast<double>(qubits) / n;
    switch (protocol) {
        case Protocol::GHZ:
            if (qubits % static_cast<std::uint64_t>(n_parties) != 0) {
                throw ScheduleError("GHZ qubit budget must be a multiple of N");
            }
            return ratio * ratio * per_party;
        case Protocol::PAIRS:
            if (qubits % (2 * static_cast<std::uint64_t>(n_parties - 1)) != 0) {
                throw ScheduleError(
                    "pairs qubit budget must be a multiple of 2(N-1)");
            }
            return 0.5 * ratio * per_party;
        case Protocol::DICKE:
            if (qubits % static_cast<std::uint64_t>(n_parties) != 0) {
                throw ScheduleError("Dicke qubit budget must be a multiple of N");
            }
            return 0.25 * ratio * ratio * per_party;
    }
    throw Error("unreachable protocol");
}

std::string report_to_text(const AdjustmentReport& report) {
    std::string out;
    char line[192];
    std::snprintf(line, sizeof(line), "protocol %s\n",
                  to_string(report.protocol).c_str());
    out += line;
    std::snprintf(line, sizeof(line), "n %d\n", report.n_parties);
    out += line;
    std::snprintf(line, sizeof(line), "rounds %llu\n",
                  static_cast<unsigned long long>(report.rounds));
    out += line;
    std::snprintf(line, sizeof(line), "qubits %llu\n",
                  static_cast<unsigned long long>(report.qubits_used));
    out += line;
    if (report.relative_to_average) {
        out += "reference average\n";
    } else {
        std::snprintf(line, sizeof(line), "reference party %d\n",
                      report.reference_party);
        out += line;
    }
    std::snprintf(line, sizeof(line), "clamps %d\n", report.clamp_count);
    out += line;
    for (const auto& p : report.parties) {
        if (std::isnan(p.true_adjustment)) {
            std::snprintf(line, sizeof(line),
                          "party %d adjustment %.12g analytic_stderr %.12g true -\n",
                          p.party, p.adjustment, p.analytic_stderr);
        } else {
            std::snprintf(line, sizeof(line),
                          "party %d adjustment %.12g analytic_stderr %.12g true %.12g\n",
                          p.party, p.adjustment, p.analytic_stderr,
                          p.true_adjustment);
        }
        out += line;
    }
    return out;
}

} // namespace qsync
