#pragma once

#include <stdexcept>
#include <string>

namespace schw {

/// Argument outside the domain of an operation (inside the horizon, m <= 0 where a horizon is needed, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-side contract was violated (e.g. a sampled function that does not vanish where it must).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for failures of a numerical method on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double last_good_r)
        : NumericalError(what), last_good_r_(last_good_r) {}
    double last_good_r() const noexcept { return last_good_r_; }

private:
    double last_good_r_;
};

/// Evaluation hit the pole of a Riccati profile.
class SingularityError : public NumericalError {
public:
    SingularityError(const std::string& what, double location)
        : NumericalError(what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

class SearchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AccuracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class GeometryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace schw
