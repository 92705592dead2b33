#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace presist {

enum class ErrorCode {
    InvalidSpec,
    DisconnectedGeneratingSet,
    Disconnected,
    SizeCapExceeded,
    InfiniteFactorPresent,
    RadiusTooSmall,
    EmptySet,
    FullSet,
    DimensionMismatch,
    NonConvergence,
    DisconnectedTerminals,
    BadArguments,
    InvalidCutsets,
    OutOfProfileRange,
    EmptyBoundary,
    ProfileUnavailable,
    DomainError,
    MissingParam,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type of the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace presist
