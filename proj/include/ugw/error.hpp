#pragma once

#include <stdexcept>
#include <string>

namespace ugw {

enum class ErrorKind {
    Parse,
    ZeroMean,
    Domain,
    Degenerate,
    NoConvergence,
    PoolNotConverged,
    DegreeExceedsN,
    CapExceeded,
    InvalidArgument,
    Io,
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::ZeroMean: return "ZeroMean";
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::PoolNotConverged: return "PoolNotConverged";
        case ErrorKind::DegreeExceedsN: return "DegreeExceedsN";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Numerical failures map to a distinct CLI exit code.
    bool numerical() const noexcept {
        return kind_ == ErrorKind::NoConvergence || kind_ == ErrorKind::PoolNotConverged ||
               kind_ == ErrorKind::Degenerate;
    }

private:
    ErrorKind kind_;
};

}  // namespace ugw
