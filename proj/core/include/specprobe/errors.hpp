#pragma once

#include <stdexcept>
#include <string>

namespace specprobe {

/// Argument outside the mathematical domain of an operation (r <= 0, x < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent argument (bad order, too few points, grid mismatch).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance or produced non-finite data.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigenvalue bracket could not be established.
class SearchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A converged result violates a structural invariant (e.g. node count != level).
class ConsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The classically allowed set is empty or disconnected at the requested energy.
class ThresholdError : public NumericalError {
public:
    ThresholdError(const std::string& what, double lambda_zero)
        : NumericalError(what), lambda_zero_(lambda_zero) {}
    double lambda_zero() const noexcept { return lambda_zero_; }

private:
    double lambda_zero_;
};

/// Spectral sum truncated while the window tail is still above tolerance.
class TruncationError : public NumericalError {
public:
    TruncationError(const std::string& what, double tail_bound)
        : NumericalError(what), tail_bound_(tail_bound) {}
    double tail_bound() const noexcept { return tail_bound_; }

private:
    double tail_bound_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace specprobe
