#pragma once

#include <complex>
#include <vector>

#include "qsync/sequences.hpp"

namespace qsync {

// 1 MiB of complex amplitudes; beyond this only closed-form samplers run.
inline constexpr int kDefaultStatevectorLimit = 16;

// Amplitudes over the computational basis, ordered by bitstring value with
// qubit 0 as the most significant bit of the index.
struct PureState {
    int num_qubits = 0;
    std::vector<std::complex<double>> amplitudes;
};

double state_norm_sq(const PureState& state);

// Throws if the squared norm deviates from 1 by more than tol.
void check_normalized(const PureState& state, double tol = 1e-9);

// Superposition of the bitstring f and its bitwise complement, 1/sqrt(2)
// each. Both branches have Hamming weight N/2, so the state is an energy
// eigenstate and free evolution is a global phase.
PureState build_ghz_state(const DistributionSequence& seq,
                          int statevector_limit = kDefaultStatevectorLimit);

// (|01> + |10>)/sqrt(2).
PureState build_bell_pair();

// Equal superposition of all C(N, N/2) weight-N/2 basis states.
PureState build_dicke_state(int n_parties,
                            int statevector_limit = kDefaultStatevectorLimit);

// Free evolution: each weight-w amplitude picks up e^{-i w tau_phase}.
// For the three protocol states this is a global phase, which is exactly
// what makes them insensitive to distribution delays.
PureState evolve_free(const PureState& state, double tau_phase);

} // namespace qsync
