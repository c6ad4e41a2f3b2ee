#pragma once

// Brute-force references the closed forms are validated against: grid plus
// golden-section minimization of the splitting problem, randomized midpoint
// convexity probes, and exhaustive enumeration of the MIP.  Deliberately
// slow and simple.

#include <cstdint>
#include <functional>

#include "cvxext/instance.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

using ScalarField = std::function<double(const Vec&)>;

struct GridSpec {
    Vec lo, hi;          // finite bounds for theta0
    double step = 1e-2;  // per-dimension grid step (coarsened to cap points)
    int refine_rounds = 1;  // 0 disables the sliding golden refinement
};

// min over theta0 in the box of (1-y) d0(theta0) + y d1(xi(theta0)), by grid
// scan followed by golden-section refinement around the best cell.  Both d0
// and d1 must be convex for the refinement to be sound.  m <= 2.
double oracle_psi(const ScalarField& d0, const ScalarField& d1, const Vec& theta,
                  double y, const GridSpec& box);

// Same, with the box found automatically by doubling a radius around theta
// until the coarse minimizer is strictly interior (d0, d1 coercive).
double oracle_psi_auto(const ScalarField& d0, const ScalarField& d1, const Vec& theta,
                       double y, double step);

// max over sampled (p, q, lambda) of f(lerp) - lerp of f; positive values
// witness non-convexity.
double oracle_convexity(const ScalarField& f, const Vec& lo, const Vec& hi,
                        int samples, std::uint64_t seed);

struct MipResult {
    double value = 0.0;
    std::vector<int> labeling;
    Vec theta;
};

// Enumerates every feasible labeling (|S| <= 12) and solves each supervised
// convex problem over theta (m <= 3) to high precision; returns the best.
MipResult oracle_mip(const Instance& inst);

}  // namespace cvxext
