#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tunnelq {

enum class ErrorKind {
    // model construction
    AsymmetricMatrix,
    OddElectronCount,
    IndexOutOfRange,
    DuplicateEntry,
    // eigenproblem / linear algebra
    DiagonalizationFailure,
    DegenerateFrontier,
    SingularMatrix,
    NumericalFailure,
    // pathway rule
    SameSite,
    MissingFrontier,
    // transport
    InvalidLead,
    EmptyGrid,
    InvalidGrid,
    GridMismatch,
    // encoding
    AngleOutOfRange,
    DegenerateRange,
    UnnormalizedState,
    EmptySamples,
    EmptyInput,
    InvalidDistribution,
    // traces
    ParseError,
    NonMonotoneTime,
    NegativeConductance,
    EmptyTrace,
    InvalidSpec,
    // files and configs
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of the numerics rather than of the inputs.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tunnelq
