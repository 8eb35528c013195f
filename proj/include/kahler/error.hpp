#pragma once

#include <stdexcept>
#include <string>

namespace kahler {

// Malformed input, bad arguments, or unsupported sizes.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Well-formed input that violates a mathematical precondition
// (e.g. a tensor that is not a Kaehler curvature tensor).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An invariant that the mathematics guarantees was observed to fail.
// Always indicates a bug, never bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace kahler
