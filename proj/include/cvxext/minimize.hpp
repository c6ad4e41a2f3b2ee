#pragma once

// Small deterministic minimizers for convex problems in very few dimensions.
//
// Golden-section search is exact (up to argument tolerance) for convex scalar
// functions: when the two probes tie, a minimizer lies between them, so every
// shrink step keeps one.  Nested application handles m <= 3 because a partial
// minimum of a jointly convex function is convex in the outer variable.

#include <functional>

#include "cvxext/vec.hpp"

namespace cvxext {

struct ScalarMin {
    double x = 0.0;
    double value = 0.0;
};

// Minimize a convex f over [lo, hi] to argument tolerance tol.
ScalarMin golden_section(const std::function<double(double)>& f, double lo,
                         double hi, double tol, int max_iter = 200);

struct BoxMin {
    Vec x;
    double value = 0.0;
};

// Coordinate-nested golden-section over an axis-aligned box; f must be
// jointly convex.  Cost grows like iter^dim, so dim is capped at 3.
BoxMin minimize_box(const std::function<double(const Vec&)>& f, const Vec& lo,
                    const Vec& hi, double tol);

// Same, but infinite bounds are replaced by a synthetic radius that doubles
// until the minimizer is strictly interior on every synthetic edge.
BoxMin minimize_box_auto(const std::function<double(const Vec&)>& f, const Vec& lo,
                         const Vec& hi, double tol, double initial_radius);

// Root of a decreasing g with g(lo) >= 0 >= g(hi), to argument tolerance.
double bisect_decreasing(const std::function<double(double)>& g, double lo,
                         double hi, double tol, int max_iter = 200);

}  // namespace cvxext
