#include "gridstress/errors.hpp"

namespace gridstress {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Alignment: return "alignment error";
        case ErrorKind::Range: return "range error";
        case ErrorKind::Schema: return "schema error";
        case ErrorKind::EmptyInput: return "empty input";
        case ErrorKind::Order: return "order error";
        case ErrorKind::Validation: return "validation error";
        case ErrorKind::Type: return "type error";
        case ErrorKind::Config: return "config error";
        case ErrorKind::InsufficientData: return "insufficient data";
        case ErrorKind::NoOverlap: return "no overlap";
        case ErrorKind::Degenerate: return "degenerate input";
        case ErrorKind::Rank: return "rank deficiency";
        case ErrorKind::Underdetermined: return "underdetermined system";
        case ErrorKind::Grid: return "grid error";
        case ErrorKind::Numerical: return "numerical failure";
    }
    return "error";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InsufficientData:
        case ErrorKind::NoOverlap:
        case ErrorKind::Range:
        case ErrorKind::Rank:
        case ErrorKind::Underdetermined:
            return 3;
        case ErrorKind::Degenerate:
        case ErrorKind::Numerical:
            return 4;
        default:
            return 2;
    }
}

}  // namespace gridstress
