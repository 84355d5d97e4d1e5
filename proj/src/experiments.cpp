#include "qsync/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>

#include "qsync/errors.hpp"

namespace qsync {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Quadrature quadrature_for(QuadraturePolicy policy, std::uint64_t round) {
    switch (policy) {
        case QuadraturePolicy::COSINE_ONLY: return Quadrature::COSINE;
        case QuadraturePolicy::SINE_ONLY: return Quadrature::SINE;
        case QuadraturePolicy::ALTERNATE:
            return round % 2 == 0 ? Quadrature::COSINE : Quadrature::SINE;
    }
    return Quadrature::COSINE;
}

// Largest |omega T_j| over balanced sequences: put the top half of the
// offsets in one group and the bottom half in the other.
double worst_signed_sum(const std::vector<double>& offsets, double omega) {
    std::vector<double> sorted = offsets;
    std::sort(sorted.begin(), sorted.end());
    double t = 0.0;
    const std::size_t half = sorted.size() / 2;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        t += (i < half ? -sorted[i] : sorted[i]);
    }
    return omega * t;
}

void check_inversion_window(const ExperimentConfig& config) {
    const double bound =
        config.estimator == EstimatorMode::LINEARIZED ? kHalfPi : std::numbers::pi;
    if (!config.offsets.empty()) {
        double worst = 0.0;
        if (config.protocol == Protocol::GHZ) {
            worst = std::abs(worst_signed_sum(config.offsets, config.omega));
        } else {
            for (double t : config.offsets) {
                worst = std::max(worst,
                                 std::abs(config.omega * (t - config.offsets[0])));
            }
        }
        if (worst >= bound) {
            throw ConfigError("offsets reach |omega T| = " + std::to_string(worst) +
                              ", outside the " + to_string(config.estimator) +
                              " inversion window of " + std::to_string(bound));
        }
        return;
    }
    if (!(config.offset_window > 0.0) || config.offset_window > kHalfPi) {
        throw ConfigError("offset_window must lie in (0, pi/2], got " +
                          std::to_string(config.offset_window));
    }
    // For the central-clock protocols the fringe argument is a single time
    // difference, so the window can be enforced exactly. For GHZ the signed
    // sum can leave the window in rare tail draws; that is accepted (and
    // clamped) rather than forbidden, since the default window keeps the
    // fold probability negligible at practical k.
    if (config.protocol != Protocol::GHZ &&
        2.0 * config.offset_window >= bound) {
        throw ConfigError("offset_window " + std::to_string(config.offset_window) +
                          " allows |omega(t_i - t_0)| up to " +
                          std::to_string(2.0 * config.offset_window) +
                          ", outside the " + to_string(config.estimator) +
                          " window of " + std::to_string(bound));
    }
}

} // namespace

QuadraturePolicy policy_for(EstimatorMode mode) {
    return mode == EstimatorMode::LINEARIZED ? QuadraturePolicy::SINE_ONLY
                                             : QuadraturePolicy::ALTERNATE;
}

std::uint64_t qubits_per_trial(const ExperimentConfig& config) {
    const auto n = static_cast<std::uint64_t>(config.n_parties);
    return config.protocol == Protocol::PAIRS ? config.rounds * 2 * (n - 1)
                                              : config.rounds * n;
}

void validate_config(const ExperimentConfig& config) {
    if (config.n_parties < 2 || config.n_parties % 2 != 0) {
        throw ConfigError("n must be even and >= 2, got " +
                          std::to_string(config.n_parties));
    }
    if (!(config.omega > 0.0)) throw ConfigError("omega must be positive");
    if (config.rounds == 0) throw ConfigError("k must be at least 1");
    if (config.trials < 1) throw ConfigError("trials must be at least 1");
    if (config.statevector_limit < 2) {
        throw ConfigError("statevector_limit must be at least 2");
    }
    if (!config.offsets.empty() &&
        config.offsets.size() != static_cast<std::size_t>(config.n_parties)) {
        throw ConfigError("offsets list has " +
                          std::to_string(config.offsets.size()) +
                          " entries for n = " + std::to_string(config.n_parties));
    }
    check_inversion_window(config);

    if (config.protocol == Protocol::GHZ) {
        if (config.n_parties > 8) {
            throw ConfigError(
                "GHZ reconstruction estimates every one of the C(N, N/2) "
                "sequences; n > 8 is supported sampling-only, not as a full "
                "synchronization experiment");
        }
        const std::uint64_t cells =
            binomial(config.n_parties, config.n_parties / 2) *
            (policy_for(config.estimator) == QuadraturePolicy::ALTERNATE ? 2 : 1);
        if (config.schedule == ScheduleMode::ROUND_ROBIN &&
            config.rounds % cells != 0) {
            throw ConfigError("round-robin k = " + std::to_string(config.rounds) +
                              " must be a multiple of " + std::to_string(cells) +
                              " for n = " + std::to_string(config.n_parties));
        }
    } else if (policy_for(config.estimator) == QuadraturePolicy::ALTERNATE &&
               config.rounds % 2 != 0) {
        throw ConfigError("two-quadrature runs need an even k, got " +
                          std::to_string(config.rounds));
    }
}

AdjustmentReport run_trial(const ExperimentConfig& config,
                           std::uint64_t trial_index) {
    validate_config(config);
    const int n = config.n_parties;
    const RandomSource master(config.seed);
    const RandomSource trial_rng = master.derive(trial_index);

    std::vector<double> offsets = config.offsets;
    if (offsets.empty()) {
        RandomSource offset_rng = trial_rng.derive(0);
        offsets.resize(n);
        const double spread = config.offset_window / config.omega;
        for (auto& t : offsets) t = offset_rng.next_in(-spread, spread);
    }
    const ClockEnsemble ensemble{n, config.omega, offsets};
    const QuadraturePolicy policy = policy_for(config.estimator);

    FringeAccumulator acc(accumulator_cells(config.protocol, n));
    switch (config.protocol) {
        case Protocol::GHZ: {
            const auto sequences = enumerate_sequences(n);
            RandomSource schedule_rng = trial_rng.derive(1);
            const auto schedule =
                make_schedule(n, config.rounds, config.schedule, policy,
                              schedule_rng, config.nominal_time);
            for (std::uint64_t r = 0; r < schedule.size(); ++r) {
                RandomSource round_rng = trial_rng.derive(2 + r);
                const auto& round = schedule[r];
                accumulate_record(
                    acc, Protocol::GHZ,
                    run_round_ghz(ensemble, sequences[round.sequence_index],
                                  round, round_rng, config.ghz_sampler,
                                  config.statevector_limit));
            }
            break;
        }
        case Protocol::PAIRS: {
            for (std::uint64_t r = 0; r < config.rounds; ++r) {
                const ScheduledRound round{0, quadrature_for(policy, r),
                                           config.nominal_time};
                RandomSource round_rng = trial_rng.derive(2 + r);
                for (int party = 1; party < n; ++party) {
                    RandomSource pair_rng = round_rng.derive(party);
                    accumulate_record(
                        acc, Protocol::PAIRS,
                        run_round_pairs(ensemble, party, round, pair_rng));
                }
            }
            break;
        }
        case Protocol::DICKE: {
            const bool statevector =
                config.dicke_sampler == DickeSamplerMode::STATEVECTOR ||
                (config.dicke_sampler == DickeSamplerMode::AUTO &&
                 n <= config.statevector_limit);
            DickeTrialSamplers cache;
            if (statevector) {
                cache = make_dicke_samplers(ensemble, config.nominal_time,
                                            policy, config.statevector_limit);
            }
            for (std::uint64_t r = 0; r < config.rounds; ++r) {
                const ScheduledRound round{0, quadrature_for(policy, r),
                                           config.nominal_time};
                RandomSource round_rng = trial_rng.derive(2 + r);
                for (const auto& rec :
                     run_round_dicke(ensemble, round, round_rng,
                                     config.dicke_sampler,
                                     config.statevector_limit,
                                     statevector ? &cache : nullptr)) {
                    accumulate_record(acc, Protocol::DICKE, rec);
                }
            }
            break;
        }
    }

    AdjustmentReport report;
    switch (config.protocol) {
        case Protocol::GHZ:
            report = estimate_ghz_adjustments(acc, n, config.omega,
                                              config.estimator);
            break;
        case Protocol::PAIRS:
            report = estimate_pairs_offsets(acc, config.omega, config.estimator);
            break;
        case Protocol::DICKE:
            report = estimate_dicke_offsets(acc, n, config.omega,
                                            config.estimator);
            break;
    }

    const double mean =
        std::accumulate(offsets.begin(), offsets.end(), 0.0) / n;
    for (auto& p : report.parties) {
        p.true_adjustment =
            report.relative_to_average
                ? offsets[p.party] - mean
                : offsets[p.party] - offsets[report.reference_party];
    }
    return report;
}

TrialSummary monte_carlo(const ExperimentConfig& config, int threads,
                         std::vector<AdjustmentReport>* out_reports) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();

    const int trials = config.trials;
    std::vector<AdjustmentReport> local;
    std::vector<AdjustmentReport>& reports = out_reports ? *out_reports : local;
    reports.assign(trials, AdjustmentReport{});

    if (threads <= 1) {
        for (int t = 0; t < trials; ++t) {
            reports[t] = run_trial(config, static_cast<std::uint64_t>(t));
        }
    } else {
        // trials are claimed by index, so the outcome is identical no
        // matter how many workers run or how they interleave
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= trials) return;
                try {
                    reports[t] = run_trial(config, static_cast<std::uint64_t>(t));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min(threads, trials);
        pool.reserve(count);
        for (int i = 0; i < count; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    TrialSummary summary;
    summary.trials = trials;
    summary.rounds = reports[0].rounds;
    summary.qubits_per_trial = reports[0].qubits_used;

    double pooled_sq = 0.0;
    double pooled_analytic_sq = 0.0;
    std::size_t pooled_n = 0;
    for (std::size_t p = 0; p < reports[0].parties.size(); ++p) {
        PartyErrorStat stat;
        stat.party = reports[0].parties[p].party;
        stat.analytic = reports[0].parties[p].analytic_stderr;
        double sq = 0.0;
        for (const auto& rep : reports) {
            const double err =
                rep.parties[p].adjustment - rep.parties[p].true_adjustment;
            sq += err * err;
        }
        stat.rms = std::sqrt(sq / trials);
        stat.ratio = stat.rms / stat.analytic;
        summary.parties.push_back(stat);
        pooled_sq += sq;
        pooled_analytic_sq += stat.analytic * stat.analytic * trials;
        pooled_n += trials;
    }
    summary.pooled_rms = std::sqrt(pooled_sq / pooled_n);
    summary.pooled_analytic = std::sqrt(pooled_analytic_sq / pooled_n);
    summary.pooled_ratio = summary.pooled_rms / summary.pooled_analytic;
    for (const auto& rep : reports) {
        summary.clamp_total += static_cast<std::uint64_t>(rep.clamp_count);
    }
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return summary;
}

std::vector<EfficiencyRow> efficiency_sweep(const SweepConfig& sweep,
                                            int threads) {
    if (sweep.n_values.empty()) throw ConfigError("sweep needs at least one n");
    if (sweep.protocols.empty()) {
        throw ConfigError("sweep needs at least one protocol");
    }
    if (sweep.qubit_budget == 0) throw ConfigError("sweep needs a qubit budget");
    if (sweep.trials < 1) throw ConfigError("sweep trials must be at least 1");

    const RandomSource seed_source(sweep.seed);
    std::vector<EfficiencyRow> rows;
    std::uint64_t row_index = 0;
    for (int n : sweep.n_values) {
        for (Protocol protocol : sweep.protocols) {
            const std::uint64_t per_round =
                protocol == Protocol::PAIRS
                    ? 2 * static_cast<std::uint64_t>(n - 1)
                    : static_cast<std::uint64_t>(n);
            if (n < 2 || sweep.qubit_budget % per_round != 0) {
                throw ConfigError(
                    "qubit budget " + std::to_string(sweep.qubit_budget) +
                    " is not a multiple of " + std::to_string(per_round) +
                    " (" + to_string(protocol) + " round cost at n = " +
                    std::to_string(n) + "); pick Q divisible by every "
                    "protocol's round cost, e.g. a multiple of lcm(N, 2(N-1))");
            }
            ExperimentConfig config;
            config.protocol = protocol;
            config.n_parties = n;
            config.omega = sweep.omega;
            config.offset_window = sweep.offset_window;
            config.rounds = sweep.qubit_budget / per_round;
            config.trials = sweep.trials;
            config.seed = seed_source.derive(row_index).next_u64();
            if (protocol == Protocol::GHZ) {
                const std::uint64_t c = binomial(n, n / 2);
                if (config.rounds % c != 0) {
                    throw ConfigError(
                        "GHZ at n = " + std::to_string(n) + " runs Q/N = " +
                        std::to_string(config.rounds) +
                        " rounds, not divisible by C(N, N/2) = " +
                        std::to_string(c) + "; pick Q a multiple of N*C(N, N/2)");
                }
            }
            const TrialSummary summary = monte_carlo(config, threads);
            EfficiencyRow row;
            row.protocol = protocol;
            row.n_parties = n;
            row.qubits = sweep.qubit_budget;
            row.rounds = config.rounds;
            row.empirical_accuracy =
                1.0 / (sweep.omega * summary.pooled_rms *
                       sweep.omega * summary.pooled_rms);
            row.analytic_accuracy =
                qubit_efficiency(protocol, n, sweep.qubit_budget);
            row.ratio = row.empirical_accuracy / row.analytic_accuracy;
            rows.push_back(row);
            ++row_index;
        }
    }
    return rows;
}

namespace {

// Deterministic, unremarkable angle sets for the validation checks.
std::vector<double> check_angles(int n) {
    static const double bank[] = {0.377, -0.921, 1.113, 0.415,
                                  -1.307, 0.659, -0.233, 0.871};
    std::vector<double> angles(n);
    for (int i = 0; i < n; ++i) angles[i] = bank[i % 8] + 0.01 * i;
    return angles;
}

std::vector<std::uint8_t> check_flags(int n) {
    std::vector<std::uint8_t> flags(n, 0);
    for (int i = 0; i < n; ++i) flags[i] = static_cast<std::uint8_t>((i + 1) % 2);
    return flags; // alternating 1,0,1,0,... : balanced for even n
}

double pair_product_expectation(const std::vector<double>& probs, int n, int a,
                                int b) {
    double e = 0.0;
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
        const int xa = ((idx >> (n - 1 - a)) & 1) ? -1 : +1;
        const int xb = ((idx >> (n - 1 - b)) & 1) ? -1 : +1;
        e += probs[idx] * xa * xb;
    }
    return e;
}

double single_expectation(const std::vector<double>& probs, int n, int a) {
    double e = 0.0;
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
        e += probs[idx] * (((idx >> (n - 1 - a)) & 1) ? -1 : +1);
    }
    return e;
}

} // namespace

ValidationReport validate_samplers(double visibility_perturbation) {
    const double vp = 1.0 + visibility_perturbation;
    ValidationReport report;
    auto add = [&](std::string name, double dev, double threshold) {
        report.checks.push_back(
            {std::move(name), dev, threshold, dev < threshold});
    };

    // closed-form GHZ law vs statevector, entry by entry
    for (int n : {2, 4, 6}) {
        DistributionSequence seq{check_flags(n), 0};
        MeasurementAngles angles{check_angles(n)};
        const auto probs =
            outcome_distribution(build_ghz_state(seq), angles);
        double phi = 0.0;
        for (int i = 0; i < n; ++i) {
            phi += seq.flags[i] ? -angles.angles[i] : angles.angles[i];
        }
        double dev = 0.0;
        const double scale = std::pow(2.0, -n);
        for (std::size_t idx = 0; idx < probs.size(); ++idx) {
            int prod = 1;
            for (int i = 0; i < n; ++i) prod *= ((idx >> (n - 1 - i)) & 1) ? -1 : 1;
            const double law = scale * (1.0 + prod * vp * std::cos(phi));
            dev = std::max(dev, std::abs(law - probs[idx]));
        }
        add("ghz_closed_form_vs_statevector_n" + std::to_string(n), dev, 1e-10);
    }

    // Bell pair law vs statevector
    {
        const double theta_p = 0.81;
        const double theta_c = -0.33;
        const auto probs = outcome_distribution(build_bell_pair(),
                                                {{theta_p, theta_c}});
        double dev = 0.0;
        for (int xp : {+1, -1}) {
            for (int xc : {+1, -1}) {
                const std::size_t idx =
                    (xp < 0 ? 2u : 0u) | (xc < 0 ? 1u : 0u);
                const double law =
                    0.25 * (1.0 + xp * xc * vp * std::cos(theta_p - theta_c));
                dev = std::max(dev, std::abs(law - probs[idx]));
            }
        }
        add("bell_pair_law_vs_statevector", dev, 1e-10);
    }

    // Dicke pair visibility vs statevector marginals
    for (int n : {2, 4, 6, 8}) {
        MeasurementAngles angles{check_angles(n)};
        const auto probs = outcome_distribution(build_dicke_state(n), angles);
        double dev = 0.0;
        for (int b : {1, n - 1}) {
            const double expected =
                vp * dicke_pair_correlation(
                         n, angles.angles[b] - angles.angles[0]);
            dev = std::max(
                dev, std::abs(pair_product_expectation(probs, n, 0, b) -
                              expected));
        }
        add("dicke_pair_visibility_n" + std::to_string(n), dev, 1e-10);
    }

    // GHZ fringe expectation at n=6
    {
        const int n = 6;
        DistributionSequence seq{check_flags(n), 0};
        MeasurementAngles angles{check_angles(n)};
        const auto probs = outcome_distribution(build_ghz_state(seq), angles);
        double phi = 0.0;
        for (int i = 0; i < n; ++i) {
            phi += seq.flags[i] ? -angles.angles[i] : angles.angles[i];
        }
        double mean = 0.0;
        for (std::size_t idx = 0; idx < probs.size(); ++idx) {
            int prod = 1;
            for (int i = 0; i < n; ++i) prod *= ((idx >> (n - 1 - i)) & 1) ? -1 : 1;
            mean += probs[idx] * prod;
        }
        add("ghz_fringe_expectation_n6",
            std::abs(mean - vp * std::cos(phi)), 1e-10);
    }

    // Dicke single-qubit means vanish (no linear fringe terms)
    {
        const int n = 6;
        const auto probs =
            outcome_distribution(build_dicke_state(n), {check_angles(n)});
        double dev = 0.0;
        for (int a = 0; a < n; ++a) {
            dev = std::max(dev, std::abs(single_expectation(probs, n, a)));
        }
        add("dicke_single_qubit_mean_n6", dev, 1e-10);
    }

    report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const ValidationCheck& c) { return c.pass; });
    return report;
}

} // namespace qsync
