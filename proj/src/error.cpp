#include "repcol/error.hpp"
#include "repcol/format.hpp"

#include <cmath>
#include <cstdio>

namespace repcol {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::Cutoff: return "cutoff";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::Unphysical: return "unphysical";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace repcol
