#pragma once

// Randomized property suites shared by the CLI check command and the
// acceptance tests: agreement with the raw objective at integer labels,
// agreement with the brute-force oracle, midpoint convexity, subgradient
// soundness, and closed-form candidate completeness.

#include <cstdint>
#include <string>

namespace cvxext {

struct CheckReport {
    std::string suite;
    long long cases = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;  // pass iff max_violation <= tolerance
    bool pass = false;
    std::string worst;  // reproduction note for the largest violation
};

// |envelope - d| at y in {0,1}, scaled by 1+|d|, across the eight extension
// implementations (three losses x two regularizers, trivial, logistic
// partial) on a theta grid. Tolerance 1e-9.
CheckReport check_extension_property(int grid_points, std::uint64_t seed);

// Envelope values against the grid/golden oracle on random instances with
// the given feature dimension (1 or 2). Violations are deviations divided
// by the case tolerance: 1e-3 for logistic terms, 1e-4 otherwise.
CheckReport check_oracle_equivalence(int instances_per_combo, int m, std::uint64_t seed);

// Midpoint convexity of envelope surfaces in (theta, y); raw max violation,
// tolerance 1e-8.
CheckReport check_convexity(int triples, std::uint64_t seed);

// Negative control: the raw hinge objective with the label interpolated
// into the margin must VIOLATE midpoint convexity. pass means a violation
// above 0.01 was found.
CheckReport check_raw_nonconvexity(int triples, std::uint64_t seed);

// Global subgradient inequality on random pairs plus finite-difference
// agreement on the smooth implementations. Violations are normalized by
// their tolerances (slack 1e-8, derivative agreement 1e-5), so the report
// tolerance is 1.
CheckReport check_subgradients(int pairs, std::uint64_t seed);

// Hinge/squared-hinge closed forms for both regularizers: the minimizing z
// must validate against the inclusion/root condition within 1e-9 and no
// problem may fail over to a generic search.
CheckReport check_candidate_completeness(int problems_per_combo, std::uint64_t seed);

}  // namespace cvxext
