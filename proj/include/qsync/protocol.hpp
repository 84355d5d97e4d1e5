#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "qsync/accumulator.hpp"
#include "qsync/kinds.hpp"
#include "qsync/measurement.hpp"
#include "qsync/sequences.hpp"

namespace qsync {

struct ClockEnsemble {
    int n_parties = 0;
    double omega = 1.0;
    std::vector<double> true_offsets; // hidden from the estimation layer
};

// N even and >= 2, omega > 0, offsets sized N.
void validate_ensemble(const ClockEnsemble& ensemble);

struct ScheduledRound {
    std::size_t sequence_index = 0; // GHZ only; 0 for pairs/Dicke rounds
    Quadrature quadrature = Quadrature::COSINE;
    double nominal_time = 0.0; // tau0, the agreed measurement time

    bool operator==(const ScheduledRound&) const = default;
};

// cell: sequence index (GHZ), party index (pair records), -1 for a full
// Dicke round whose N outcomes are reduced to pair products later.
struct MeasurementRecord {
    ScheduledRound round;
    int cell = 0;
    std::vector<std::int8_t> outcomes;
    int product = 0;

    bool operator==(const MeasurementRecord&) const = default;
};

struct BroadcastLog {
    Protocol protocol = Protocol::GHZ;
    int n_parties = 0;
    double nominal_time = 0.0;
    std::vector<MeasurementRecord> records;

    void append(MeasurementRecord rec) { records.push_back(std::move(rec)); }
};

// GHZ schedule over all C(N, N/2) sequences. ROUND_ROBIN gives every
// (sequence, quadrature) cell exactly k / (C * quads) rounds and requires
// that division to be exact; UNIFORM_RANDOM draws sequences uniformly.
// ALTERNATE flips quadrature by round parity in both modes.
std::vector<ScheduledRound> make_schedule(
    int n_parties, std::uint64_t k, ScheduleMode mode, QuadraturePolicy policy,
    RandomSource& rng, double nominal_time = 0.0,
    std::uint64_t sequence_cap = kDefaultSequenceCap);

// Measurement angles theta_i = omega*(tau0 + t_i). SINE rounds shift the
// designated party by +pi/2: for GHZ the lowest index with f_i = 0, for
// pairs/Dicke every non-central party (the central clock is party 0).
MeasurementAngles ghz_round_angles(const ClockEnsemble& ensemble,
                                   const DistributionSequence& seq,
                                   const ScheduledRound& round);
// (theta_party, theta_central)
std::pair<double, double> pair_round_angles(const ClockEnsemble& ensemble,
                                            int party,
                                            const ScheduledRound& round);
MeasurementAngles dicke_round_angles(const ClockEnsemble& ensemble,
                                     const ScheduledRound& round);

MeasurementRecord run_round_ghz(const ClockEnsemble& ensemble,
                                const DistributionSequence& seq,
                                const ScheduledRound& round, RandomSource& rng,
                                GhzSamplerMode mode = GhzSamplerMode::CLOSED_FORM,
                                int statevector_limit = kDefaultStatevectorLimit);

// One Bell pair shared between the central clock and `party`; outcomes
// stored as (x_party, x_central). Costs 2 qubits.
MeasurementRecord run_round_pairs(const ClockEnsemble& ensemble, int party,
                                  const ScheduledRound& round,
                                  RandomSource& rng);

// Statevector samplers for one trial's fixed angles; build once, draw per
// round. Holds one sampler per quadrature actually used.
struct DickeTrialSamplers {
    std::optional<JointOutcomeSampler> cosine;
    std::optional<JointOutcomeSampler> sine;
};

DickeTrialSamplers make_dicke_samplers(const ClockEnsemble& ensemble,
                                       double nominal_time,
                                       QuadraturePolicy policy,
                                       int statevector_limit = kDefaultStatevectorLimit);

// Statevector path: one record with all N outcomes (cell -1). Marginal
// path: N-1 two-outcome records, one per party. Either way the round
// consumes N qubits and yields N-1 pair products.
std::vector<MeasurementRecord> run_round_dicke(
    const ClockEnsemble& ensemble, const ScheduledRound& round,
    RandomSource& rng, DickeSamplerMode mode = DickeSamplerMode::AUTO,
    int statevector_limit = kDefaultStatevectorLimit,
    const DickeTrialSamplers* cache = nullptr);

// Number of fringe cells the accumulator needs for a protocol.
std::size_t accumulator_cells(Protocol protocol, int n_parties,
                              std::uint64_t sequence_cap = kDefaultSequenceCap);

// Folds one record into the accumulator: GHZ and pair records add their
// product to their cell; a full Dicke record adds the N-1 central-vs-party
// products to the party cells.
void accumulate_record(FringeAccumulator& acc, Protocol protocol,
                       const MeasurementRecord& record);

// Line-delimited text round-trip. One record per line:
//   <ordinal> <cell> <C|S> <x_1> ... <x_m>
// after a header carrying protocol, N and tau0.
void write_log(std::ostream& out, const BroadcastLog& log);
BroadcastLog read_log(std::istream& in);

// Rebuilds the accumulator a live run would have produced; validates cell
// ranges, outcome values and the recorded products.
FringeAccumulator replay(const BroadcastLog& log);

} // namespace qsync
