#pragma once

#include <stdexcept>
#include <string>

namespace rayfuse {

// Failure while reading or writing files. The message names the offending
// path and, for parse failures, the line or byte offset.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition on in-memory data (dimension mismatch, empty cloud,
// degenerate camera, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rayfuse
