#pragma once

#include <stdexcept>
#include <string>

namespace qmono {

/// Malformed input: unreadable files, bad JSON, unparsable arguments.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (normalization, hermiticity, index ranges, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal numerical consistency check failed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qmono
