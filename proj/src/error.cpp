#include "tunnelq/error.hpp"

namespace tunnelq {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorKind::OddElectronCount: return "OddElectronCount";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DuplicateEntry: return "DuplicateEntry";
    case ErrorKind::DiagonalizationFailure: return "DiagonalizationFailure";
    case ErrorKind::DegenerateFrontier: return "DegenerateFrontier";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::SameSite: return "SameSite";
    case ErrorKind::MissingFrontier: return "MissingFrontier";
    case ErrorKind::InvalidLead: return "InvalidLead";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::UnnormalizedState: return "UnnormalizedState";
    case ErrorKind::EmptySamples: return "EmptySamples";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorKind::NegativeConductance: return "NegativeConductance";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    }
    return "UnknownError";
}

bool is_numerical(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DiagonalizationFailure:
    case ErrorKind::DegenerateFrontier:
    case ErrorKind::SingularMatrix:
    case ErrorKind::NumericalFailure:
        return true;
    default:
        return false;
    }
}

} // namespace tunnelq
