#pragma once

#include <stdexcept>
#include <string>

namespace sparserec {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NoConvergence,
    CombinatorialGuard,
    Io,
    Parse,
};

// All library failures surface as this exception; the C API maps `kind()`
// onto its status codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
    if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace sparserec
