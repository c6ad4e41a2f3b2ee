#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cvxext {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2sq(const Vec& a) { return dot(a, a); }

inline double norm2(const Vec& a) { return std::sqrt(norm2sq(a)); }

inline double norm1(const Vec& a) {
    double s = 0.0;
    for (double v : a) s += std::fabs(v);
    return s;
}

inline double norm_inf(const Vec& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::fabs(v));
    return s;
}

// a + s*b
inline Vec axpy(const Vec& a, double s, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
}

inline Vec scaled(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline double clamp(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

}  // namespace cvxext
