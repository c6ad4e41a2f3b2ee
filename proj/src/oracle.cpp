#include "cvxext/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cvxext/errors.hpp"
#include "cvxext/minimize.hpp"

namespace cvxext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::function<double(const Vec&)> split_objective(const ScalarField& d0,
                                                  const ScalarField& d1,
                                                  const Vec& theta, double y) {
    return [&d0, &d1, theta, y](const Vec& t0) {
        Vec t1(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i)
            t1[i] = (theta[i] - (1.0 - y) * t0[i]) / y;
        return (1.0 - y) * d0(t0) + y * d1(t1);
    };
}

// Golden refinement seeded at a grid minimizer.  A convex objective can run
// along a narrow anisotropic valley, where the grid minimizer lands many
// cells from the continuous one; the window slides toward the minimizer and
// doubles while the argmin keeps hitting a window edge that is not a bound
// (infinite bounds never block sliding).
double slide_refine(const std::function<double(const Vec&)>& F, Vec best_pt,
                    double best, const Vec& steps, const Vec& lo, const Vec& hi) {
    const std::size_t m = best_pt.size();
    Vec rlo(m), rhi(m);
    double radius = 2.0;
    for (int it = 0; it < 80; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            rlo[i] = std::max(lo[i], best_pt[i] - radius * steps[i]);
            rhi[i] = std::min(hi[i], best_pt[i] + radius * steps[i]);
        }
        const BoxMin ref = minimize_box(F, rlo, rhi, 1e-9);
        if (ref.value < best) best = ref.value;
        bool on_edge = false;
        for (std::size_t i = 0; i < m; ++i) {
            const double edge = 1e-6 * (rhi[i] - rlo[i]);
            if (ref.x[i] < rlo[i] + edge && rlo[i] > lo[i]) on_edge = true;
            if (ref.x[i] > rhi[i] - edge && rhi[i] < hi[i]) on_edge = true;
        }
        best_pt = ref.x;
        if (!on_edge) break;
        radius *= 2.0;
    }
    return best;
}

}  // namespace

double oracle_psi(const ScalarField& d0, const ScalarField& d1, const Vec& theta,
                  double y, const GridSpec& box) {
    const std::size_t m = theta.size();
    if (m == 0 || m > 2) throw domain_error("oracle_psi: only m in {1, 2}");
    if (!(y > 0.0) || !(y < 1.0)) throw domain_error("oracle_psi: y must be fractional");
    if (box.lo.size() != m || box.hi.size() != m || !(box.step > 0.0))
        throw config_error("oracle_psi: bad grid spec");
    const auto F = split_objective(d0, d1, theta, y);

    // per-dimension counts, coarsened so the scan stays within the guard
    std::vector<std::size_t> counts(m);
    Vec steps(m);
    const double per_dim_cap = m == 1 ? 1e7 : 3000.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double width = box.hi[i] - box.lo[i];
        if (!(width >= 0.0) || std::isinf(width))
            throw config_error("oracle_psi: grid bounds must be finite");
        double step = box.step;
        if (width / step + 1.0 > per_dim_cap) step = width / (per_dim_cap - 1.0);
        counts[i] = width == 0.0 ? 1 : static_cast<std::size_t>(std::floor(width / step)) + 1;
        steps[i] = step;
    }

    Vec best_pt(box.lo);
    double best = kInf;
    Vec pt(m);
    if (m == 1) {
        for (std::size_t a = 0; a < counts[0]; ++a) {
            pt[0] = std::min(box.lo[0] + static_cast<double>(a) * steps[0], box.hi[0]);
            const double v = F(pt);
            if (v < best) { best = v; best_pt = pt; }
        }
    } else {
        for (std::size_t a = 0; a < counts[0]; ++a) {
            pt[0] = std::min(box.lo[0] + static_cast<double>(a) * steps[0], box.hi[0]);
            for (std::size_t b = 0; b < counts[1]; ++b) {
                pt[1] = std::min(box.lo[1] + static_cast<double>(b) * steps[1], box.hi[1]);
                const double v = F(pt);
                if (v < best) { best = v; best_pt = pt; }
            }
        }
    }

    if (box.refine_rounds <= 0) return best;
    return slide_refine(F, best_pt, best, steps, box.lo, box.hi);
}

double oracle_psi_auto(const ScalarField& d0, const ScalarField& d1, const Vec& theta,
                       double y, double step) {
    const std::size_t m = theta.size();
    if (m == 0 || m > 2) throw domain_error("oracle_psi: only m in {1, 2}");
    const auto F = split_objective(d0, d1, theta, y);
    double R = 4.0 * (1.0 + norm_inf(theta));
    for (int round = 0; round < 26; ++round) {
        // coarse scan to locate the minimizer's cell
        const std::size_t n = 61;
        Vec lo(m), hi(m), pt(m), best_pt(m);
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = theta[i] - R;
            hi[i] = theta[i] + R;
        }
        const double h = 2.0 * R / static_cast<double>(n - 1);
        double best = kInf;
        if (m == 1) {
            for (std::size_t a = 0; a < n; ++a) {
                pt[0] = lo[0] + static_cast<double>(a) * h;
                const double v = F(pt);
                if (v < best) { best = v; best_pt = pt; }
            }
        } else {
            for (std::size_t a = 0; a < n; ++a) {
                pt[0] = lo[0] + static_cast<double>(a) * h;
                for (std::size_t b = 0; b < n; ++b) {
                    pt[1] = lo[1] + static_cast<double>(b) * h;
                    const double v = F(pt);
                    if (v < best) { best = v; best_pt = pt; }
                }
            }
        }
        bool interior = true;
        for (std::size_t i = 0; i < m; ++i)
            interior = interior && best_pt[i] > lo[i] + 1.5 * h &&
                       best_pt[i] < hi[i] - 1.5 * h;
        if (!interior) {
            R *= 2.0;
            continue;
        }
        // no real bounds here: the slide refinement may leave the scan box
        const Vec steps(m, std::max(h, step));
        const Vec nlo(m, -kInf), nhi(m, kInf);
        return slide_refine(F, best_pt, best, steps, nlo, nhi);
    }
    throw numeric_error("oracle_psi: minimizer keeps escaping the search box");
}

double oracle_convexity(const ScalarField& f, const Vec& lo, const Vec& hi,
                        int samples, std::uint64_t seed) {
    if (lo.size() != hi.size() || lo.empty())
        throw config_error("oracle_convexity: bad box");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t k = lo.size();
    Vec p(k), q(k), mid(k);
    double worst = -kInf;
    for (int s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < k; ++i) {
            p[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
            q[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
        }
        const double lam = unit(rng);
        for (std::size_t i = 0; i < k; ++i) mid[i] = lam * p[i] + (1.0 - lam) * q[i];
        worst = std::max(worst, f(mid) - lam * f(p) - (1.0 - lam) * f(q));
    }
    return worst;
}

MipResult oracle_mip(const Instance& inst) {
    validate(inst);
    const int n = sample_count(inst);
    const int m = feature_dim(inst);
    if (n > 12) throw config_error("oracle_mip: |S| guarded to 12");
    if (m > 3) throw config_error("oracle_mip: m guarded to 3");
    const auto members = enumerate_members(inst.labels, n);
    if (members.empty()) throw infeasible_error("oracle_mip: no feasible labeling");
    const ExtensionSet ext = build_extensions(inst);
    const Vec lo = box_lower(inst.reg, static_cast<std::size_t>(m));
    const Vec hi = box_upper(inst.reg, static_cast<std::size_t>(m));
    MipResult best;
    best.value = kInf;
    for (const auto& y : members) {
        const auto f = [&](const Vec& t) { return objective_value(inst, ext, t, y); };
        const BoxMin sol = minimize_box_auto(f, lo, hi, 1e-9, 4.0);
        if (sol.value < best.value) {
            best.value = sol.value;
            best.labeling = y;
            best.theta = sol.x;
        }
    }
    return best;
}

}  // namespace cvxext
