#include "qsync/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

int designated_party(const DistributionSequence& seq) {
    for (int i = 0; i < seq.n(); ++i) {
        if (seq.flags[i] == 0) return i;
    }
    throw InvalidEnsembleError("sequence has no unflipped party");
}

int product_of(const std::vector<std::int8_t>& outcomes) {
    int p = 1;
    for (auto x : outcomes) p *= x;
    return p;
}

void check_party_range(int party, int n_parties, const char* who) {
    if (party < 1 || party >= n_parties) {
        throw DimensionError(std::string(who) + ": party index " +
                             std::to_string(party) + " out of range 1.." +
                             std::to_string(n_parties - 1));
    }
}

} // namespace

void validate_ensemble(const ClockEnsemble& ensemble) {
    if (ensemble.n_parties < 2 || ensemble.n_parties % 2 != 0) {
        throw InvalidEnsembleError("ensemble needs an even N >= 2, got " +
                                   std::to_string(ensemble.n_parties));
    }
    if (!(ensemble.omega > 0.0)) {
        throw InvalidEnsembleError("ensemble omega must be positive");
    }
    if (ensemble.true_offsets.size() !=
        static_cast<std::size_t>(ensemble.n_parties)) {
        throw InvalidEnsembleError(
            "ensemble has " + std::to_string(ensemble.true_offsets.size()) +
            " offsets for " + std::to_string(ensemble.n_parties) + " parties");
    }
}

std::vector<ScheduledRound> make_schedule(int n_parties, std::uint64_t k,
                                          ScheduleMode mode,
                                          QuadraturePolicy policy,
                                          RandomSource& rng,
                                          double nominal_time,
                                          std::uint64_t sequence_cap) {
    if (k == 0) throw ScheduleError("schedule needs at least one round");
    const std::uint64_t n_seq = [&] {
        // reuse the enumeration preconditions without materializing it
        if (n_parties < 2 || n_parties % 2 != 0) {
            throw InvalidEnsembleError("make_schedule: N must be even and >= 2");
        }
        const std::uint64_t c = binomial(n_parties, n_parties / 2);
        if (c > sequence_cap) {
            throw CapacityError("make_schedule: C(N, N/2) = " + std::to_string(c) +
                                " exceeds the sequence cap");
        }
        return c;
    }();

    const Quadrature quads[2] = {Quadrature::COSINE, Quadrature::SINE};
    std::size_t quad_count = policy == QuadraturePolicy::ALTERNATE ? 2 : 1;
    const Quadrature single = policy == QuadraturePolicy::SINE_ONLY
                                  ? Quadrature::SINE
                                  : Quadrature::COSINE;

    if (mode == ScheduleMode::ROUND_ROBIN) {
        const std::uint64_t cells = n_seq * quad_count;
        if (k % cells != 0) {
            throw ScheduleError("round-robin k = " + std::to_string(k) +
                                " must be a positive multiple of " +
                                std::to_string(cells) + " (sequences x quadratures)");
        }
    }

    std::vector<ScheduledRound> schedule;
    schedule.reserve(k);
    for (std::uint64_t r = 0; r < k; ++r) {
        ScheduledRound round;
        round.nominal_time = nominal_time;
        round.quadrature =
            quad_count == 2 ? quads[r % 2] : single; // parity split is exact
        round.sequence_index =
            mode == ScheduleMode::ROUND_ROBIN
                ? static_cast<std::size_t>((r / quad_count) % n_seq)
                : static_cast<std::size_t>(rng.next_below(n_seq));
        schedule.push_back(round);
    }
    return schedule;
}

MeasurementAngles ghz_round_angles(const ClockEnsemble& ensemble,
                                   const DistributionSequence& seq,
                                   const ScheduledRound& round) {
    validate_ensemble(ensemble);
    if (seq.n() != ensemble.n_parties) {
        throw DimensionError("sequence length " + std::to_string(seq.n()) +
                             " vs ensemble of " +
                             std::to_string(ensemble.n_parties));
    }
    MeasurementAngles angles;
    angles.angles.resize(ensemble.n_parties);
    for (int i = 0; i < ensemble.n_parties; ++i) {
        angles.angles[i] =
            ensemble.omega * (round.nominal_time + ensemble.true_offsets[i]);
    }
    if (round.quadrature == Quadrature::SINE) {
        angles.angles[designated_party(seq)] += kHalfPi;
    }
    return angles;
}

std::pair<double, double> pair_round_angles(const ClockEnsemble& ensemble,
                                            int party,
                                            const ScheduledRound& round) {
    validate_ensemble(ensemble);
    check_party_range(party, ensemble.n_parties, "pair_round_angles");
    const double theta_c =
        ensemble.omega * (round.nominal_time + ensemble.true_offsets[0]);
    double theta_p =
        ensemble.omega * (round.nominal_time + ensemble.true_offsets[party]);
    if (round.quadrature == Quadrature::SINE) theta_p += kHalfPi;
    return {theta_p, theta_c};
}

MeasurementAngles dicke_round_angles(const ClockEnsemble& ensemble,
                                     const ScheduledRound& round) {
    validate_ensemble(ensemble);
    MeasurementAngles angles;
    angles.angles.resize(ensemble.n_parties);
    for (int i = 0; i < ensemble.n_parties; ++i) {
        angles.angles[i] =
            ensemble.omega * (round.nominal_time + ensemble.true_offsets[i]);
        if (round.quadrature == Quadrature::SINE && i > 0) {
            angles.angles[i] += kHalfPi;
        }
    }
    return angles;
}

MeasurementRecord run_round_ghz(const ClockEnsemble& ensemble,
                                const DistributionSequence& seq,
                                const ScheduledRound& round, RandomSource& rng,
                                GhzSamplerMode mode, int statevector_limit) {
    if (seq.index != round.sequence_index) {
        throw DimensionError("run_round_ghz: sequence " +
                             std::to_string(seq.index) +
                             " does not match scheduled index " +
                             std::to_string(round.sequence_index));
    }
    const MeasurementAngles angles = ghz_round_angles(ensemble, seq, round);
    OutcomeString out =
        mode == GhzSamplerMode::CLOSED_FORM
            ? sample_ghz_closed_form(seq, angles, rng)
            : sample_outcome(build_ghz_state(seq, statevector_limit), angles,
                             rng);
    MeasurementRecord record;
    record.round = round;
    record.cell = static_cast<int>(seq.index);
    record.product = out.product();
    record.outcomes = std::move(out.outcomes);
    return record;
}

MeasurementRecord run_round_pairs(const ClockEnsemble& ensemble, int party,
                                  const ScheduledRound& round,
                                  RandomSource& rng) {
    const auto [theta_p, theta_c] = pair_round_angles(ensemble, party, round);
    const auto [x_p, x_c] = sample_bell_pair_outcomes(theta_p, theta_c, rng);
    MeasurementRecord record;
    record.round = round;
    record.round.sequence_index = 0;
    record.cell = party;
    record.outcomes = {static_cast<std::int8_t>(x_p),
                       static_cast<std::int8_t>(x_c)};
    record.product = x_p * x_c;
    return record;
}

DickeTrialSamplers make_dicke_samplers(const ClockEnsemble& ensemble,
                                       double nominal_time,
                                       QuadraturePolicy policy,
                                       int statevector_limit) {
    const PureState state =
        build_dicke_state(ensemble.n_parties, statevector_limit);
    DickeTrialSamplers samplers;
    if (policy != QuadraturePolicy::SINE_ONLY) {
        samplers.cosine.emplace(
            state, dicke_round_angles(ensemble,
                                      {0, Quadrature::COSINE, nominal_time}));
    }
    if (policy != QuadraturePolicy::COSINE_ONLY) {
        samplers.sine.emplace(
            state,
            dicke_round_angles(ensemble, {0, Quadrature::SINE, nominal_time}));
    }
    return samplers;
}

std::vector<MeasurementRecord> run_round_dicke(const ClockEnsemble& ensemble,
                                               const ScheduledRound& round,
                                               RandomSource& rng,
                                               DickeSamplerMode mode,
                                               int statevector_limit,
                                               const DickeTrialSamplers* cache) {
    validate_ensemble(ensemble);
    const int n = ensemble.n_parties;
    const bool statevector =
        mode == DickeSamplerMode::STATEVECTOR ||
        (mode == DickeSamplerMode::AUTO && n <= statevector_limit);

    std::vector<MeasurementRecord> records;
    if (statevector) {
        OutcomeString out;
        const JointOutcomeSampler* sampler = nullptr;
        if (cache != nullptr) {
            sampler = round.quadrature == Quadrature::SINE
                          ? (cache->sine ? &*cache->sine : nullptr)
                          : (cache->cosine ? &*cache->cosine : nullptr);
        }
        if (sampler != nullptr) {
            out = sampler->draw(rng);
        } else {
            const JointOutcomeSampler fresh(
                build_dicke_state(n, statevector_limit),
                dicke_round_angles(ensemble, round));
            out = fresh.draw(rng);
        }
        MeasurementRecord record;
        record.round = round;
        record.round.sequence_index = 0;
        record.cell = -1;
        record.product = out.product();
        record.outcomes = std::move(out.outcomes);
        records.push_back(std::move(record));
    } else {
        records.reserve(n - 1);
        for (int party = 1; party < n; ++party) {
            const auto [theta_p, theta_c] =
                pair_round_angles(ensemble, party, round);
            const auto [x_p, x_c] = sample_dicke_pair(n, theta_p, theta_c, rng);
            MeasurementRecord record;
            record.round = round;
            record.round.sequence_index = 0;
            record.cell = party;
            record.outcomes = {static_cast<std::int8_t>(x_p),
                               static_cast<std::int8_t>(x_c)};
            record.product = x_p * x_c;
            records.push_back(std::move(record));
        }
    }
    return records;
}

std::size_t accumulator_cells(Protocol protocol, int n_parties,
                              std::uint64_t sequence_cap) {
    if (protocol == Protocol::GHZ) {
        const std::uint64_t c = binomial(n_parties, n_parties / 2);
        if (c > sequence_cap) {
            throw CapacityError("GHZ accumulator would need " +
                                std::to_string(c) + " cells, above the cap");
        }
        return static_cast<std::size_t>(c);
    }
    return static_cast<std::size_t>(n_parties);
}

void accumulate_record(FringeAccumulator& acc, Protocol protocol,
                       const MeasurementRecord& record) {
    const Quadrature q = record.round.quadrature;
    if (protocol == Protocol::GHZ) {
        acc.add(static_cast<std::size_t>(record.cell), q, record.product);
        return;
    }
    if (record.cell == -1) {
        // full Dicke round: reduce to central-vs-party products
        for (std::size_t i = 1; i < record.outcomes.size(); ++i) {
            acc.add(i, q, record.outcomes[0] * record.outcomes[i]);
        }
        return;
    }
    if (record.cell < 1) {
        throw DimensionError("pair record cell must be a party index >= 1");
    }
    acc.add(static_cast<std::size_t>(record.cell), q, record.product);
}

void write_log(std::ostream& out, const BroadcastLog& log) {
    char header[128];
    std::snprintf(header, sizeof(header), "qsync-log 1 %s %d %.17g\n",
                  to_string(log.protocol).c_str(), log.n_parties,
                  log.nominal_time);
    out << header;
    for (std::size_t r = 0; r < log.records.size(); ++r) {
        const auto& rec = log.records[r];
        if (rec.round.nominal_time != log.nominal_time) {
            throw LogFormatError("record " + std::to_string(r) +
                                 " has a different nominal time than the log");
        }
        out << r << ' ' << rec.cell << ' '
            << (rec.round.quadrature == Quadrature::SINE ? 'S' : 'C');
        for (auto x : rec.outcomes) out << ' ' << (x > 0 ? "+1" : "-1");
        out << '\n';
    }
}

BroadcastLog read_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw LogFormatError("empty log stream");

    BroadcastLog log;
    {
        std::istringstream head(line);
        std::string magic, proto;
        int version = 0;
        if (!(head >> magic >> version >> proto >> log.n_parties >>
              log.nominal_time) ||
            magic != "qsync-log" || version != 1) {
            throw LogFormatError("bad log header: " + line);
        }
        if (proto == "GHZ") log.protocol = Protocol::GHZ;
        else if (proto == "PAIRS") log.protocol = Protocol::PAIRS;
        else if (proto == "DICKE") log.protocol = Protocol::DICKE;
        else throw LogFormatError("unknown protocol in log header: " + proto);
        std::string extra;
        if (head >> extra) throw LogFormatError("trailing header tokens");
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t ordinal = 0;
        int cell = 0;
        char quad = 0;
        if (!(ls >> ordinal >> cell >> quad) || (quad != 'C' && quad != 'S')) {
            throw LogFormatError("malformed record at line " +
                                 std::to_string(line_no));
        }
        if (ordinal != log.records.size()) {
            throw LogFormatError("record ordinal " + std::to_string(ordinal) +
                                 " out of order at line " +
                                 std::to_string(line_no));
        }
        MeasurementRecord rec;
        rec.cell = cell;
        rec.round.quadrature = quad == 'S' ? Quadrature::SINE : Quadrature::COSINE;
        rec.round.nominal_time = log.nominal_time;
        rec.round.sequence_index =
            (log.protocol == Protocol::GHZ && cell >= 0)
                ? static_cast<std::size_t>(cell)
                : 0;
        int value = 0;
        while (ls >> value) {
            if (value != 1 && value != -1) {
                throw LogFormatError("outcome must be +-1 at line " +
                                     std::to_string(line_no));
            }
            rec.outcomes.push_back(static_cast<std::int8_t>(value));
        }
        if (!ls.eof()) {
            throw LogFormatError("trailing junk at line " + std::to_string(line_no));
        }
        if (rec.outcomes.empty()) {
            throw LogFormatError("record without outcomes at line " +
                                 std::to_string(line_no));
        }
        rec.product = product_of(rec.outcomes);
        log.records.push_back(std::move(rec));
    }
    return log;
}

FringeAccumulator replay(const BroadcastLog& log) {
    const std::size_t cells = accumulator_cells(log.protocol, log.n_parties);
    FringeAccumulator acc(cells);
    const std::size_t n = static_cast<std::size_t>(log.n_parties);
    for (std::size_t r = 0; r < log.records.size(); ++r) {
        const auto& rec = log.records[r];
        for (auto x : rec.outcomes) {
            if (x != 1 && x != -1) {
                throw LogFormatError("record " + std::to_string(r) +
                                     ": outcomes must be +-1");
            }
        }
        if (rec.product != product_of(rec.outcomes)) {
            throw LogFormatError("record " + std::to_string(r) +
                                 ": product does not match outcomes");
        }
        const bool size_ok = [&] {
            switch (log.protocol) {
                case Protocol::GHZ:
                    return rec.cell >= 0 &&
                           static_cast<std::size_t>(rec.cell) < cells &&
                           rec.outcomes.size() == n;
                case Protocol::PAIRS:
                    return rec.cell >= 1 &&
                           static_cast<std::size_t>(rec.cell) < n &&
                           rec.outcomes.size() == 2;
                case Protocol::DICKE:
                    if (rec.cell == -1) return rec.outcomes.size() == n;
                    return rec.cell >= 1 &&
                           static_cast<std::size_t>(rec.cell) < n &&
                           rec.outcomes.size() == 2;
            }
            return false;
        }();
        if (!size_ok) {
            throw LogFormatError("record " + std::to_string(r) +
                                 ": cell or outcome count invalid for " +
                                 to_string(log.protocol));
        }
        accumulate_record(acc, log.protocol, rec);
    }
    return acc;
}

} // namespace qsync
