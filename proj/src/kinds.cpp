#include "qsync/kinds.hpp"

namespace qsync {

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::GHZ: return "GHZ";
        case Protocol::PAIRS: return "PAIRS";
        case Protocol::DICKE: return "DICKE";
    }
    return "?";
}

std::string to_string(Quadrature q) {
    return q == Quadrature::SINE ? "SINE" : "COSINE";
}

std::string to_string(ScheduleMode m) {
    return m == ScheduleMode::ROUND_ROBIN ? "ROUND_ROBIN" : "UNIFORM_RANDOM";
}

std::string to_string(EstimatorMode m) {
    return m == EstimatorMode::LINEARIZED ? "LINEARIZED" : "TWO_QUADRATURE";
}

std::string to_string(GhzSamplerMode m) {
    return m == GhzSamplerMode::CLOSED_FORM ? "CLOSED_FORM" : "STATEVECTOR";
}

std::string to_string(DickeSamplerMode m) {
    switch (m) {
        case DickeSamplerMode::AUTO: return "AUTO";
        case DickeSamplerMode::STATEVECTOR: return "STATEVECTOR";
        case DickeSamplerMode::MARGINAL: return "MARGINAL";
    }
    return "?";
}

} // namespace qsync
