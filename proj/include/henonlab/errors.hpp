#pragma once

#include <stdexcept>
#include <string>

namespace henonlab {

enum class ErrorKind {
    ExponentOutOfRange,
    BadDimension,
    BadAlpha,
    SingularSample,
    BoundaryMismatch,
    GridMismatch,
    InterpolationOutOfRange,
    DegenerateInit,
    InsufficientData,
    TruncationUnstable,
    ConfigError,
    IoError,
};

/// Library-wide exception; `kind` lets callers map failures to exit codes
/// without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace henonlab
