#pragma once

// Feasible labelings Y as constraints over bit vectors indexed by samples:
// fixed bits, an optional exact-cardinality constraint, and generic linear
// inequalities a^T y <= rhs.  The fractional relaxation keeps the same
// constraints over [0,1]^S.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cvxext/vec.hpp"

namespace cvxext {

struct LinearConstraint {
    Vec coeffs;  // one coefficient per sample
    double rhs = 0.0;
};

struct LabelConstraintSet {
    std::map<int, int> fixed;          // sample index -> 0/1
    std::optional<int> cardinality;    // sum of labels equals k
    std::vector<LinearConstraint> linear;
};

void validate(const LabelConstraintSet& cons, int samples);

bool is_member(const LabelConstraintSet& cons, const std::vector<int>& y);

// Box, fixed, cardinality and linear constraints at tolerance tol.
bool fractional_feasible(const LabelConstraintSet& cons, const Vec& y, double tol);

// All feasible bit vectors in lexicographic order (y[0] most significant).
// Guarded to samples <= 20.
std::vector<std::vector<int>> enumerate_members(const LabelConstraintSet& cons,
                                                int samples);

}  // namespace cvxext
