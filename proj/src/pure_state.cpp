#include "qsync/pure_state.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {
namespace {

void check_capacity(int n, int limit, const char* who) {
    if (n > limit) {
        throw CapacityError(std::string(who) + ": " + std::to_string(n) +
                            " qubits exceeds the statevector limit of " +
                            std::to_string(limit) +
                            "; use the closed-form or marginal samplers");
    }
    if (n < 1) {
        throw InvalidEnsembleError(std::string(who) + ": need at least 1 qubit");
    }
}

} // namespace

double state_norm_sq(const PureState& state) {
    double s = 0.0;
    for (const auto& a : state.amplitudes) s += std::norm(a);
    return s;
}

void check_normalized(const PureState& state, double tol) {
    if (state.amplitudes.size() != (std::size_t{1} << state.num_qubits)) {
        throw DimensionError("state has " + std::to_string(state.amplitudes.size()) +
                             " amplitudes for " + std::to_string(state.num_qubits) +
                             " qubits");
    }
    const double n = state_norm_sq(state);
    if (std::abs(n - 1.0) > tol) {
        throw Error("state norm^2 = " + std::to_string(n) +
                    " deviates from 1 beyond " + std::to_string(tol));
    }
}

PureState build_ghz_state(const DistributionSequence& seq, int statevector_limit) {
    const int n = seq.n();
    if (n % 2 != 0 || n < 2) {
        throw InvalidEnsembleError("build_ghz_state: N must be even and >= 2, got " +
                                   std::to_string(n));
    }
    check_capacity(n, statevector_limit, "build_ghz_state");

    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        idx = (idx << 1) | (seq.flags[i] ? 1u : 0u); // qubit 0 lands on the MSB
    }
    const std::size_t mask = (std::size_t{1} << n) - 1;

    PureState state{n, std::vector<std::complex<double>>(std::size_t{1} << n)};
    const double amp = std::numbers::sqrt2 / 2.0;
    state.amplitudes[idx] = amp;
    state.amplitudes[~idx & mask] = amp;
    return state;
}

PureState build_bell_pair() {
    return build_ghz_state({{0, 1}, 0});
}

PureState build_dicke_state(int n_parties, int statevector_limit) {
    if (n_parties % 2 != 0 || n_parties < 2) {
        throw InvalidEnsembleError("build_dicke_state: N must be even and >= 2, got " +
                                   std::to_string(n_parties));
    }
    check_capacity(n_parties, statevector_limit, "build_dicke_state");

    PureState state{n_parties,
                    std::vector<std::complex<double>>(std::size_t{1} << n_parties)};
    const std::uint64_t count = binomial(n_parties, n_parties / 2);
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    const int half = n_parties / 2;
    for (std::size_t b = 0; b < state.amplitudes.size(); ++b) {
        if (std::popcount(b) == half) state.amplitudes[b] = amp;
    }
    return state;
}

PureState evolve_free(const PureState& state, double tau_phase) {
    PureState out = state;
    for (std::size_t b = 0; b < out.amplitudes.size(); ++b) {
        const double w = static_cast<double>(std::popcount(b));
        out.amplitudes[b] *= std::polar(1.0, -w * tau_phase);
    }
    return out;
}

} // namespace qsync
