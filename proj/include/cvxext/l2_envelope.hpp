#pragma once

// Envelope of a single term d(theta, y) = (1/2)||theta||_2^2 + C l(<x,theta>, y)
// at a fractional label y in (0, 1), with theta unconstrained.
//
// The optimal split (theta0, theta1) of the two-point interpolation problem
// has the one-parameter form theta0 = theta - y C x z, theta1 = theta +
// (1-y) C x z, where z solves the scalar inclusion
//     z in dl0(<x,theta0>) - dl1(<x,theta1>).
// For hinge and squared hinge the solutions lie in a small closed-form
// candidate set (flat pieces and kink crossings of the piecewise residual);
// for logistic and squared difference the residual is strictly decreasing in
// z and a bisection finds the root.

#include "cvxext/interval.hpp"
#include "cvxext/loss.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

struct L2EnvelopeProblem {
    Vec x;          // nonzero feature vector
    double C = 1.0; // loss scale, > 0
    LossSpec loss;
    Vec theta;
    double y = 0.5; // strictly fractional
};

// R(z) = dl0(x.theta - y C |x|^2 z) - dl1(x.theta + (1-y) C |x|^2 z) - z.
// A solution z satisfies 0 in R(z).
Interval l2_root_residual(const L2EnvelopeProblem& p, double z);

// Closed-form candidate z values for Hinge / SquaredHinge.
std::vector<double> l2_candidates(const L2EnvelopeProblem& p);

struct L2Solution {
    double value = 0.0;  // envelope value Psi(theta, y)
    Vec theta0, theta1;  // optimal split
    double z = 0.0;
    Interval g0;         // loss slopes at the split, for subgradients:
    Interval g1;         // g0 in dl0(r0), g1 in dl1(r1), with z = g0 - g1
};

// Throws numeric_error if no closed-form candidate validates (hinge family)
// or the bisection bracket cannot be established (smooth family).
L2Solution solve_l2_envelope(const L2EnvelopeProblem& p);

}  // namespace cvxext
