#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ewg {

enum class ErrorKind {
    InvalidParameter,
    ClosedChannel,
    OutOfModel,
    NumericalFailure,
    DegenerateBoundary,
    Stiffness,
    AccuracyFailure,
    RefinementNeeded,
    NoCrossing,
    Geometry,
    InvalidPath,
    NoSolution,
    ModelInvalid,
    Parse,
    Validation,
    Io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace ewg
