#pragma once

// Per-term convex extensions in (theta, y) for a single sample's term
//     d(theta, y) = [omega(theta) if the term carries the regularizer]
//                   + C * l(<x, theta>, y).
// At integer y the extension equals d exactly; at fractional y it is the
// tightest convex extension of d restricted to binary y,
//     Psi(theta, y) = inf { (1-y) d(t0, 0) + y d(t1, 1)
//                           : (1-y) t0 + y t1 = theta },
// except for the Trivial method (zero on fractional y, valid because d >= 0)
// and the LogisticPartial method (an explicit quadratic closed form for the
// bilinear term ||theta||^2 - C<x,theta>y).

#include <vector>

#include "cvxext/l1_envelope.hpp"
#include "cvxext/l2_envelope.hpp"
#include "cvxext/loss.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

enum class ExtensionMethod {
    Trivial,         // d at integer y, 0 at fractional y
    ClosedFormL2,    // candidate-based z (hinge, squared hinge), L2 regularizer
    BisectionL2,     // root bisection (logistic, squared difference), L2
    ClosedFormL1,    // coordinate sweep over a box, L1 regularizer
    LogisticPartial  // quadratic closed form for ||theta||^2 - C<x,theta>y
};
const char* to_string(ExtensionMethod m);

struct TermExtension {
    ExtensionMethod method = ExtensionMethod::Trivial;
    Vec x;
    double C = 1.0;
    LossSpec loss;
    RegularizerSpec reg;
    bool include_reg = false;  // true: d = omega + C l; false: d = C l
};

// (theta - (1-y) t) / y componentwise. Throws domain_error when y = 0.
Vec xi_map(const Vec& theta, double y, const Vec& t);

// Raw term value d(theta, y). For LogisticPartial this is the bilinear
// surrogate s||theta||^2 - C c <x,theta> y, not omega + C l.
double term_d_value(const TermExtension& ext, const Vec& theta, double y);

// d at integer y, 0 at fractional y.
double trivial_extension_value(const TermExtension& ext, const Vec& theta, double y);

// ||theta - y (C/2) x||^2 - y ||(C/2) x||^2, the tightest convex extension
// of ||theta||^2 - C <x,theta> y over binary y.
double logistic_partial_extension_value(double C, const Vec& x, const Vec& theta,
                                        double y);

struct EnvelopeEval {
    double value = 0.0;
    // Optimal split (theta0, theta1) with (1-y) theta0 + y theta1 = theta.
    // Meaningful only when has_split; methods without an inner problem
    // (Trivial, LogisticPartial, integer y) report theta0 = theta1 = theta.
    Vec theta0, theta1;
    bool has_split = false;
};

EnvelopeEval envelope_eval(const TermExtension& ext, const Vec& theta, double y);
double envelope_value(const TermExtension& ext, const Vec& theta, double y);

// Midpoint element of the theta-subdifferential of d(., y01) at theta.
Vec term_integer_subgradient(const TermExtension& ext, const Vec& theta, double y01);

struct SubgradientPair {
    Vec v;          // theta component
    double w = 0.0; // y component; +inf at y = 0 and -inf at y = 1
};

// Subgradient of the extension at (theta, y).  For fractional y, v is a
// common element of the subdifferentials of d0 at theta0 and d1 at theta1
// (midpoint selection for determinism) and
// w = v.theta0 - v.theta1 + d1(theta1) - d0(theta0).  At integer y the
// y-component is an infinite flag; callers clamp it before stepping.
SubgradientPair envelope_subgradient(const TermExtension& ext, const Vec& theta,
                                     double y);

}  // namespace cvxext
