#pragma once

#include <stdexcept>
#include <string>

namespace rmot {

/// Raised when an input object violates a documented precondition or
/// invariant (bad weights, mismatched dimensions, malformed JSON, ...).
/// The CLI maps this family to exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a solve cannot be carried out: the finite-cost linear program
/// is infeasible, or a size/iteration budget was exceeded.
/// The CLI maps this family to exit code 2.
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an asserted certificate (duality gap, support bound,
/// truncation equality, ...) fails to hold on a solved instance.
/// The CLI maps this family to exit code 3.
class certificate_error : public std::runtime_error {
public:
    explicit certificate_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rmot
