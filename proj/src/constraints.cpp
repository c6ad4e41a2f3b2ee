#include "cvxext/constraints.hpp"

#include <cmath>

#include "cvxext/errors.hpp"

namespace cvxext {

void validate(const LabelConstraintSet& cons, int samples) {
    if (samples < 1) throw config_error("constraints: need at least one sample");
    for (const auto& [s, b] : cons.fixed) {
        if (s < 0 || s >= samples)
            throw config_error("constraints: fixed index out of range");
        if (b != 0 && b != 1) throw config_error("constraints: fixed label not a bit");
    }
    if (cons.cardinality) {
        const int k = *cons.cardinality;
        if (k < 0 || k > samples)
            throw config_error("constraints: cardinality outside [0, |S|]");
    }
    for (const auto& lc : cons.linear) {
        if (static_cast<int>(lc.coeffs.size()) != samples)
            throw config_error("constraints: linear coefficient count != |S|");
        if (!std::isfinite(lc.rhs))
            throw config_error("constraints: linear rhs not finite");
    }
}

bool is_member(const LabelConstraintSet& cons, const std::vector<int>& y) {
    for (int b : y)
        if (b != 0 && b != 1) return false;
    for (const auto& [s, b] : cons.fixed) {
        if (s < 0 || s >= static_cast<int>(y.size())) return false;
        if (y[static_cast<std::size_t>(s)] != b) return false;
    }
    if (cons.cardinality) {
        int sum = 0;
        for (int b : y) sum += b;
        if (sum != *cons.cardinality) return false;
    }
    for (const auto& lc : cons.linear) {
        double lhs = 0.0;
        for (std::size_t s = 0; s < y.size(); ++s) lhs += lc.coeffs[s] * y[s];
        if (lhs > lc.rhs + 1e-9) return false;
    }
    return true;
}

bool fractional_feasible(const LabelConstraintSet& cons, const Vec& y, double tol) {
    for (double v : y)
        if (v < -tol || v > 1.0 + tol) return false;
    for (const auto& [s, b] : cons.fixed) {
        if (s < 0 || s >= static_cast<int>(y.size())) return false;
        if (std::abs(y[static_cast<std::size_t>(s)] - b) > tol) return false;
    }
    if (cons.cardinality) {
        double sum = 0.0;
        for (double v : y) sum += v;
        if (std::abs(sum - *cons.cardinality) > tol) return false;
    }
    for (const auto& lc : cons.linear) {
        if (dot(lc.coeffs, y) > lc.rhs + tol) return false;
    }
    return true;
}

std::vector<std::vector<int>> enumerate_members(const LabelConstraintSet& cons,
                                                int samples) {
    validate(cons, samples);
    if (samples > 20)
        throw config_error("constraints: enumeration guarded to 20 samples");
    std::vector<std::vector<int>> out;
    const std::uint32_t n = 1u << samples;
    std::vector<int> y(static_cast<std::size_t>(samples));
    for (std::uint32_t mask = 0; mask < n; ++mask) {
        for (int s = 0; s < samples; ++s)
            y[static_cast<std::size_t>(s)] =
                (mask >> (samples - 1 - s)) & 1u ? 1 : 0;
        if (is_member(cons, y)) out.push_back(y);
    }
    return out;
}

}  // namespace cvxext
