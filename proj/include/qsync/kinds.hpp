#pragma once

#include <cstdint>
#include <string>

namespace qsync {

enum class Protocol : std::uint8_t { GHZ, PAIRS, DICKE };

enum class Quadrature : std::uint8_t { COSINE, SINE };

enum class ScheduleMode : std::uint8_t { ROUND_ROBIN, UNIFORM_RANDOM };

// Which quadratures a schedule cycles through. ALTERNATE switches by round
// parity so both quadratures get exactly equal counts.
enum class QuadraturePolicy : std::uint8_t { COSINE_ONLY, SINE_ONLY, ALTERNATE };

// LINEARIZED inverts the sine fringe alone (valid |omega T| < pi/2);
// TWO_QUADRATURE combines both fringes via atan2 (valid |omega T| < pi).
enum class EstimatorMode : std::uint8_t { LINEARIZED, TWO_QUADRATURE };

enum class GhzSamplerMode : std::uint8_t { CLOSED_FORM, STATEVECTOR };

// AUTO: statevector when N fits the limit, marginal pair sampler above it.
enum class DickeSamplerMode : std::uint8_t { AUTO, STATEVECTOR, MARGINAL };

std::string to_string(Protocol);
std::string to_string(Quadrature);
std::string to_string(ScheduleMode);
std::string to_string(EstimatorMode);
std::string to_string(GhzSamplerMode);
std::string to_string(DickeSamplerMode);

} // namespace qsync
