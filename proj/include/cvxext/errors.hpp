#pragma once

#include <stdexcept>
#include <string>

namespace cvxext {

// Input outside the mathematical domain of an operation (theta outside the
// box, y outside [0,1], label vector of wrong length, ...).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Structurally invalid or unsupported configuration (bad file, unsupported
// loss/regularizer/decomposition combination).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Empty feasible set.  Maps to CLI exit code 2.
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric procedure failed to certify its result (bracket not found, no
// candidate root validates).  Maps to CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvxext
