#pragma once

#include <stdexcept>
#include <string>

namespace pdkit {

// Base for all toolkit errors. Subclasses mark which exit code the CLI uses.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: malformed CSV, schema mismatches, missing columns.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Numeric failure: singular systems, non-finite values, non-convergence.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Caller misuse: out-of-range parameters, dimension mismatches.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

}  // namespace pdkit
