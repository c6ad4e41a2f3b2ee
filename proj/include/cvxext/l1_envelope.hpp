#pragma once

// Envelope of a single term d(theta, y) = ||theta||_1 + C l(<x,theta>, y)
// over a finite box [b, t], at a fractional label y in (0, 1).
//
// Writing V for theta0 (so theta1 = xi(V) = (theta - (1-y) V) / y), the
// objective splits into a separable two-anchor l1 part
//     (1-y) sum_i ( |V_i| + |V_i - theta_i/(1-y)| )
// plus a loss part depending on p = <x, V> alone, whose slope set is
// (1-y) C a(p) with
//     a(p) = dl0(p) - dl1( (<x,theta> - (1-y) p) / y ).
// Each coordinate of the two-anchor part absorbs loss slopes of magnitude up
// to 2 at its anchors, which is where the guard constant 2 comes from.  For
// margin losses with one-sided decay, a(p) >= 0, so coordinates only ever
// move toward smaller <x, V>: down to the effective lower bound when
// x_i > 0, up to the effective upper bound otherwise.  The sweep visits
// coordinates in decreasing |x_i| and stops at the first point satisfying
// the exact per-coordinate stationarity condition; the final coordinate is
// placed by solving |a(<x,V> - z x_k) C x_k| = 2 in closed form (hinge
// family) or by bisection (logistic).

#include <vector>

#include "cvxext/interval.hpp"
#include "cvxext/loss.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

struct L1EnvelopeProblem {
    Vec x;
    double C = 1.0;
    LossSpec loss;
    Vec theta;
    double y = 0.5;  // strictly fractional
    Vec lower, upper;  // finite box containing theta
};

// a(p) as a closed interval.
Interval a_multimap(const L1EnvelopeProblem& p, double pval);

// Effective bounds for V = theta0: the original box intersected with the
// preimage of the box under xi, i.e. b' = max(b, xi_{theta,1-y}(t)),
// t' = min(t, xi_{theta,1-y}(b)).  Nonempty whenever theta lies in [b, t].
struct L1Box {
    Vec b_prime, t_prime;
};
L1Box effective_box(const L1EnvelopeProblem& p);

// Minimizer of the two-anchor l1 part alone: anchor 0 when
// (theta_i > 0) == (x_i > 0), anchor theta_i/(1-y) otherwise, clamped to
// the effective box.  The anchor choice matches the sign the loss slope
// C r x_i (r >= 0) will take, so a later bound push continues in the same
// direction.
Vec theta_prime_projection(const L1EnvelopeProblem& p, const L1Box& box);

// True iff some r in a(<x,V>) satisfies ||r C x||_inf <= 2.
bool l1_guard(const L1EnvelopeProblem& p, const Vec& V);

// Exact optimality test: exists r in a(<x,V>) compatible with every
// coordinate's two-anchor subdifferential and box normal cone.
bool l1_stationary(const L1EnvelopeProblem& p, const L1Box& box, const Vec& V);

// Closed-form candidates for the final-coordinate equation
// |a(<x,V> - z x_k) C x_k| = 2 (hinge and squared hinge only).
std::vector<double> solve_z_l1_candidates(const L1EnvelopeProblem& p, const Vec& V,
                                          int k);

struct AuxResult {
    Vec V;
    // max(0, min a(<x,V>) * C * ||x||_inf - 2) recorded after each sweep
    // step; non-increasing along the sweep.
    std::vector<double> guard_gap_trace;
};

// The coordinate sweep described above, starting from V0 (normally the
// two-anchor minimizer).  Throws numeric_error if no back-solve candidate
// validates where one is required.
AuxResult aux(const L1EnvelopeProblem& p, const L1Box& box, Vec V0);

// (1-y) d0(V) + y d1(xi(V)).
double l1_split_objective(const L1EnvelopeProblem& p, const Vec& V);

struct L1Solution {
    double value = 0.0;
    Vec theta0, theta1;
};

L1Solution l1_envelope_value(const L1EnvelopeProblem& p);

}  // namespace cvxext
