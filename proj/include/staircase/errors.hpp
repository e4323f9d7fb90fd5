#pragma once

#include <stdexcept>
#include <string>

namespace staircase {

/// Parameter outside the admissible range of the construction (e.g. d not in (0, 0.2)).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller violated an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested lag does not fit in the tower of the evaluation stage; raise K.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Materialization would exceed the configured size cap; use the implicit kernel instead.
class CapExceededError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace staircase
