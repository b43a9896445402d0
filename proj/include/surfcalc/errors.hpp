#pragma once

#include <stdexcept>
#include <string>

namespace surfcalc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the first fundamental form degenerates (G below the configured floor).
struct SingularMetric : Error {
    using Error::Error;
};

/// Raised when a co-normal is requested at a junction of two boundary segments.
struct CornerNode : Error {
    using Error::Error;
};

struct DegenerateSegment : Error {
    using Error::Error;
};

struct InsufficientTimeLevels : Error {
    using Error::Error;
};

struct StepTooSmall : Error {
    using Error::Error;
};

struct CFLViolation : Error {
    using Error::Error;
};

struct NonpositiveDensity : Error {
    using Error::Error;
};

struct NonpositiveThermo : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(std::string field_path, const std::string& message)
        : Error(field_path.empty() ? message : field_path + ": " + message), field(std::move(field_path)) {}

    std::string field;
};

}  // namespace surfcalc
