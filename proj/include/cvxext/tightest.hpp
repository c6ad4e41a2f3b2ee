#pragma once

// Exact tightest convex extension of phi over Theta x conv(Y) at desk
// scale: enumerate the subsets Y' of Y of size |S|+1 whose convex hull
// contains the query labeling y, compute barycentric coefficients lambda,
// and take the smallest value of
//     inf { sum_{y' in Y'} lambda(y') phi(theta'(y'), y')
//           : sum lambda(y') theta'(y') = theta,  theta'(y') in Theta }.
// NP-hard in general; enumeration is gated to |Y| <= 20, |S| <= 8.

#include <vector>

#include "cvxext/constraints.hpp"
#include "cvxext/instance.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

struct LabelSet {
    int S_size = 0;
    std::vector<std::vector<int>> members;
};

void validate(const LabelSet& Y);
LabelSet label_set_from_constraints(const LabelConstraintSet& cons, int samples);

struct SupportSet {
    std::vector<int> member_index;  // indices into LabelSet::members
    Vec lambdas;                    // nonnegative, sum 1, sum lambda y' = y
};

// All subsets of size min(|S|+1, |Y|) containing y in their convex hull.
// Throws domain_error when y lies outside conv Y (no subset qualifies).
std::vector<SupportSet> enumerate_support_sets(const LabelSet& Y, const Vec& y);

double tightest_extension_value(const Instance& inst, const LabelSet& Y,
                                const Vec& theta, const Vec& y);

}  // namespace cvxext
