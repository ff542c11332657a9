#include "ewg/errors.hpp"

namespace ewg {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::ClosedChannel: return "closed-channel";
        case ErrorKind::OutOfModel: return "out-of-model";
        case ErrorKind::NumericalFailure: return "numerical-failure";
        case ErrorKind::DegenerateBoundary: return "degenerate-boundary";
        case ErrorKind::Stiffness: return "stiffness";
        case ErrorKind::AccuracyFailure: return "accuracy-failure";
        case ErrorKind::RefinementNeeded: return "refinement-needed";
        case ErrorKind::NoCrossing: return "no-crossing";
        case ErrorKind::Geometry: return "geometry";
        case ErrorKind::InvalidPath: return "invalid-path";
        case ErrorKind::NoSolution: return "no-solution";
        case ErrorKind::ModelInvalid: return "model-invalid";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ewg
