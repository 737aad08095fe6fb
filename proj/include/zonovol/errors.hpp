#pragma once

#include <stdexcept>
#include <string>

namespace zonovol {

// Caller broke a precondition (dimension mismatch, bad multiplicities, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Enumeration would exceed the configured tuple budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested inequality/theorem does not apply to the given bodies.
class ApplicabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact evaluation path is unavailable and Monte Carlo was not allowed.
class NeedsMonteCarlo : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lower-dimensional input where a full-dimensional body is required.
class DegenerateBody : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Round-off exceeded what the algorithm can absorb (e.g. a clearly negative mixed volume).
class NumericalInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver failed to converge.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace zonovol
