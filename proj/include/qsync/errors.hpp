#pragma once

#include <stdexcept>
#include <string>

namespace qsync {

// Base for everything thrown on purpose; anything else escaping the
// library is a bug.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Clock ensemble violates a protocol precondition (size, parity, window).
class InvalidEnsembleError : public Error {
public:
    using Error::Error;
};

// Statevector path requested beyond the configured party limit.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Vector/angle/outcome sizes disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A fringe is missing rounds for some (sequence, quadrature) cell.
class CoverageError : public Error {
public:
    using Error::Error;
};

// Round budget incompatible with the schedule policy.
class ScheduleError : public Error {
public:
    using Error::Error;
};

// Config file is malformed or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Broadcast log text cannot be parsed back into rounds.
class LogFormatError : public Error {
public:
    using Error::Error;
};

} // namespace qsync
