#pragma once

#include <stdexcept>
#include <string>

namespace trajeval {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative speed,
/// empty series, degenerate projection input).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation called on an input that violates its precondition, e.g. a gap
/// query on an intersecting pair or an out-of-range jerk index.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration, scenario or trajectory content.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Two trajectories that cannot be put on a common time grid.
class AlignmentError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// The vehicle never enters the goal radius. Distinct from a long but valid
/// travel time.
class UnreachedGoalError : public Error {
public:
    using Error::Error;
};

}  // namespace trajeval
