#pragma once

#include <stdexcept>
#include <string>

namespace repcol {

enum class ErrorKind {
    InvalidArgument,  // invalid level or parameter value
    Cutoff,           // Fock cutoff too small / tail guard tripped
    Shape,            // mode count or dimension mismatch
    Resource,         // dimension guard exceeded
    Domain,           // argument outside a function's domain
    Numerical,        // instability, non-convergent estimate, underflow
    Unphysical,       // state violates a physicality constraint
    Parse,            // malformed input text
    Validation,       // well-formed input with out-of-domain fields
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace repcol
