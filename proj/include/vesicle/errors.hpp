#pragma once

#include <stdexcept>
#include <string>

namespace vesicle {

/// Input outside the admissible set (negative fractions, u1 + u2 > 1,
/// pool above capacity, size mismatch, bad parameter).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Formula needs a strictly interior state but got one on the boundary of
/// the domain (some of u1, u2, u0 equal to zero).
class SingularStateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Linear solve hit a zero (or non-finite) pivot.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vesicle
