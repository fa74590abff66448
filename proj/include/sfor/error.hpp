#pragma once

#include <stdexcept>
#include <string>

namespace sfor {

/// Invalid input: bad parameters, malformed configuration, index out of range.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument lies on a pole or outside the supported domain of a function.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A computation failed numerically (non-SPD pivot, nonconvergence, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested accuracy could not be reached; carries the achieved estimate.
class AccuracyError : public NumericalError {
public:
    AccuracyError(const std::string& what, double achieved)
        : NumericalError(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace sfor
