#pragma once

#include <stdexcept>
#include <string>

namespace dysonforge {

/// Input outside the domain of a formula or solver (λ vanishing, k = 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation or integration failed (non-finite values, step underflow, singularity hit).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run configuration rejected before any computation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dysonforge
