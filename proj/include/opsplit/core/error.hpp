#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opsplit {

enum class ErrorKind {
    InvalidArgument,
    Unsupported,
    UnsupportedSchedule,
    InvalidConfig,
    SolverFailure,
    NonConvergence,
    NonFinite,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::UnsupportedSchedule: return "unsupported-schedule";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::NonFinite: return "non-finite";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

} // namespace opsplit
