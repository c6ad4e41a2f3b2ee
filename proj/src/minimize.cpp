#include "cvxext/minimize.hpp"

#include <cmath>
#include <limits>

#include "cvxext/errors.hpp"

namespace cvxext {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;   // 0.618...
const double kInvPhi2 = 1.0 - kInvPhi;                 // 0.382...
}

ScalarMin golden_section(const std::function<double(double)>& f, double lo,
                         double hi, double tol, int max_iter) {
    if (!(lo <= hi)) throw domain_error("golden_section: empty interval");
    if (hi - lo <= tol) {
        const double x = 0.5 * (lo + hi);
        return {x, f(x)};
    }
    double a = lo, b = hi;
    double c = a + kInvPhi2 * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = a + kInvPhi2 * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

namespace {

BoxMin minimize_box_impl(const std::function<double(const Vec&)>& f, const Vec& lo,
                         const Vec& hi, double tol) {
    const int m = static_cast<int>(lo.size());
    Vec cur(m, 0.0);
    // Minimizes over coordinates i.. with cur[0..i-1] held; leaves cur[i..]
    // at the inner argmin so callers can read the full point back.
    std::function<double(int)> solve = [&](int i) -> double {
        if (i == m) return f(cur);
        auto g = [&](double u) {
            cur[i] = u;
            return solve(i + 1);
        };
        const ScalarMin sm = golden_section(g, lo[i], hi[i], tol);
        cur[i] = sm.x;
        return solve(i + 1);
    };
    const double v = solve(0);
    return {cur, v};
}

}  // namespace

BoxMin minimize_box(const std::function<double(const Vec&)>& f, const Vec& lo,
                    const Vec& hi, double tol) {
    if (lo.size() != hi.size()) throw domain_error("minimize_box: bound size mismatch");
    if (lo.size() > 3) throw domain_error("minimize_box: dimension capped at 3");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i])
            throw domain_error("minimize_box: invalid bounds");
    return minimize_box_impl(f, lo, hi, tol);
}

BoxMin minimize_box_auto(const std::function<double(const Vec&)>& f, const Vec& lo,
                         const Vec& hi, double tol, double initial_radius) {
    const int m = static_cast<int>(lo.size());
    double R = std::max(initial_radius, 1.0);
    for (int round = 0; round < 48; ++round) {
        Vec clo(m), chi(m);
        bool synthetic = false;
        for (int i = 0; i < m; ++i) {
            clo[i] = std::isfinite(lo[i]) ? lo[i] : (synthetic = true, -R);
            chi[i] = std::isfinite(hi[i]) ? hi[i] : (synthetic = true, R);
        }
        BoxMin bm = minimize_box(f, clo, chi, tol);
        if (!synthetic) return bm;
        bool interior = true;
        const double margin = std::max(16.0 * tol, 1e-6 * R);
        for (int i = 0; i < m; ++i) {
            if (!std::isfinite(lo[i]) && bm.x[i] < clo[i] + margin) interior = false;
            if (!std::isfinite(hi[i]) && bm.x[i] > chi[i] - margin) interior = false;
        }
        if (interior) return bm;
        R *= 2.0;
    }
    throw numeric_error("minimize_box_auto: minimizer keeps escaping to the boundary");
}

double bisect_decreasing(const std::function<double(double)>& g, double lo,
                         double hi, double tol, int max_iter) {
    double glo = g(lo), ghi = g(hi);
    if (glo < 0.0 && ghi < 0.0) return glo >= ghi ? lo : hi;  // no crossing: best edge
    if (glo < 0.0 || ghi > 0.0) {
        // Decreasing g should satisfy g(lo) >= 0 >= g(hi); tolerate tiny noise.
        if (glo < -1e-12 || ghi > 1e-12)
            throw numeric_error("bisect_decreasing: bracket does not straddle zero");
    }
    double a = lo, b = hi;
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm >= 0.0) a = mid;
        else b = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace cvxext
