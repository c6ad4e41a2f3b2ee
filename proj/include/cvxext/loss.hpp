#pragma once

// Margin losses and regularizers.
//
// Losses are scalar functions l(r, y) of a margin r = <x, theta> and a binary
// label y, convex in r for each fixed label.  Hinge and squared hinge carry
// per-class weights (c0 for y = 0, c1 for y = 1); the squared hinge includes
// a factor 1/2 in its weighted form.  The logistic loss accepts the same
// weights for interface uniformity (defaults 1 recover the unweighted form).
// The squared difference ignores the weights entirely.

#include <string>

#include "cvxext/interval.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

enum class LossKind { SquaredDifference, Logistic, Hinge, SquaredHinge };

struct LossSpec {
    LossKind kind = LossKind::Hinge;
    double c0 = 1.0;  // class weight for y = 0
    double c1 = 1.0;  // class weight for y = 1
};

// Throws config_error unless c0, c1 > 0.
void validate(const LossSpec& spec);

// l(r, y) for y in {0, 1}.  Nonnegative and convex in r.
double loss_value(const LossSpec& spec, double r, int y);

// Subdifferential of l(., y) at r as a closed interval; a singleton where
// the loss is differentiable.
Interval loss_subdifferential(const LossSpec& spec, double r, int y);

// Whether l(r, 1) -> 0 as r -> +inf and l(-r, 0) -> 0 as r -> +inf.  This
// one-sided decay is what collapses the per-term envelope of a loss-only
// decomposition to zero at fractional labels.
bool loss_has_decay(LossKind kind);

// log(1 + exp(u)) without overflow.
double log1pexp(double u);

// 1 / (1 + exp(-u))
double sigmoid(double u);

std::string to_string(LossKind kind);

enum class RegKind { L1, L2 };

// omega(theta) with an optional box domain.  For L2 the `half` flag selects
// (1/2)||theta||_2^2 instead of ||theta||_2^2; both forms appear in practice.
// Bounds may be +-inf (unbounded coordinates); L1 envelope evaluation at
// fractional labels requires all of them finite.
struct RegularizerSpec {
    RegKind kind = RegKind::L2;
    bool half = false;
    Vec lower;  // empty means unbounded below
    Vec upper;  // empty means unbounded above
};

// Throws config_error if lower/upper have inconsistent sizes or lower > upper.
void validate(const RegularizerSpec& spec, int dim);

double regularizer_value(const RegularizerSpec& spec, const Vec& theta);

// Componentwise subdifferential of omega at theta.
std::vector<Interval> regularizer_subdifferential(const RegularizerSpec& spec,
                                                  const Vec& theta);

// Box accessors normalized to dimension `dim` with +-inf for missing bounds.
Vec box_lower(const RegularizerSpec& spec, int dim);
Vec box_upper(const RegularizerSpec& spec, int dim);
bool box_contains(const RegularizerSpec& spec, const Vec& theta, double tol = 0.0);

std::string to_string(RegKind kind);

}  // namespace cvxext
