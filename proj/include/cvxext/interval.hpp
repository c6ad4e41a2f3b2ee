#pragma once

#include <algorithm>
#include <cmath>

namespace cvxext {

// Closed interval [lo, hi].  Used for subdifferentials of scalar convex
// functions; a singleton has lo == hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double a, double b) : lo(a), hi(b) {}
    static Interval point(double v) { return {v, v}; }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double v, double tol = 0.0) const {
        return v >= lo - tol && v <= hi + tol;
    }
    bool is_point(double tol = 0.0) const { return width() <= tol; }

    // Distance from v to the interval (0 if inside).
    double distance(double v) const {
        if (v < lo) return lo - v;
        if (v > hi) return v - hi;
        return 0.0;
    }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
    Interval operator+(double c) const { return {lo + c, hi + c}; }
    Interval operator-(double c) const { return {lo - c, hi - c}; }

    // Scaling flips the endpoints for negative factors.
    Interval operator*(double c) const {
        return c >= 0 ? Interval{lo * c, hi * c} : Interval{hi * c, lo * c};
    }

    // |I| as an interval.
    Interval abs() const {
        if (lo >= 0) return {lo, hi};
        if (hi <= 0) return {-hi, -lo};
        return {0.0, std::max(-lo, hi)};
    }
};

// Intersection; empty result reported through the flag.
inline Interval intersect(const Interval& a, const Interval& b, bool& ok) {
    Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    ok = r.lo <= r.hi;
    return r;
}

}  // namespace cvxext
