#pragma once

#include <stdexcept>
#include <string>

namespace gridstress {

enum class ErrorKind {
    Alignment,       // timestamp not on an hour boundary
    Range,           // requested month/window not covered by a series
    Schema,          // declared column absent, bad schema
    EmptyInput,      // no parseable rows
    Order,           // timestamps going backwards
    Validation,      // implausible values
    Type,            // wrong variable kind for an operation
    Config,          // bad configuration / CLI usage
    InsufficientData,
    NoOverlap,
    Degenerate,
    Rank,
    Underdetermined,
    Grid,
    Numerical,
};

const char* to_string(ErrorKind kind);

/// Process exit code for an error kind: 2 input/config, 3 insufficient data,
/// 4 numerical failure.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gridstress
