#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Error categories map one-to-one onto CLI exit codes:
// usage 2, resource budget 3, domain validity 4.

/// Bad arguments: malformed input, out-of-range coordinates, vertices outside the interior.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration or state-space cap was hit. Never silently truncated.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters fall outside the region where a formula is defined (e.g. lambda_h >= 4^-3).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace aniso
