#pragma once

#include <stdexcept>
#include <string>

namespace irav {

/// Bad arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (files, bitstreams, geometry).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (e.g. decoder/encoder mismatch).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace irav
