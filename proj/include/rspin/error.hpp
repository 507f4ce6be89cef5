#pragma once

#include <stdexcept>
#include <string>

namespace rspin {

// Exit codes used by the command-line driver. Library errors map onto them
// through Error::exit_code().
enum class ExitCode : int {
    ok = 0,
    usage = 1,
    data = 2,
    capacity = 3,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::data; }
};

// Malformed arguments: dimension mismatches, out-of-range indices, bad orders.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Non-finite values produced during integration.
class NumericError : public Error {
public:
    using Error::Error;
};

// Problem too large for exhaustive enumeration.
class CapacityError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::capacity; }
};

// Malformed files or schema violations; message carries file/line context.
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace rspin
