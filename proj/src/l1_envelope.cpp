#include "cvxext/l1_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cvxext/errors.hpp"
#include "cvxext/minimize.hpp"

namespace cvxext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const L1EnvelopeProblem& p) {
    validate(p.loss);
    const std::size_t m = p.theta.size();
    if (p.x.size() != m) throw domain_error("l1 envelope: x and theta dimensions differ");
    if (!(p.C > 0.0)) throw config_error("l1 envelope: C must be positive");
    if (!(p.y > 0.0) || !(p.y < 1.0))
        throw domain_error("l1 envelope: label must be strictly fractional");
    if (p.loss.kind == LossKind::SquaredDifference)
        throw config_error("l1 envelope: squared difference loss is not supported");
    if (p.lower.size() != m || p.upper.size() != m)
        throw config_error("l1 envelope: box bounds must match the dimension");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(p.lower[i] <= p.upper[i]))
            throw config_error("l1 envelope: empty box");
        if (std::isinf(p.lower[i]) && std::isinf(p.upper[i]))
            throw config_error(
                "l1 envelope: each coordinate needs at least one finite bound");
        const double s = 1e-9 * (1.0 + std::abs(p.theta[i]));
        if (p.theta[i] < p.lower[i] - s || p.theta[i] > p.upper[i] + s)
            throw domain_error("l1 envelope: theta outside the box");
    }
}

double xi_coord(const L1EnvelopeProblem& p, double vi, std::size_t i) {
    return (p.theta[i] - (1.0 - p.y) * vi) / p.y;
}

Vec xi_of(const L1EnvelopeProblem& p, const Vec& V) {
    Vec w(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) w[i] = xi_coord(p, V[i], i);
    return w;
}

// Subdifferential of |v| + |v - c| with a small matching tolerance for the
// anchor points.
Interval two_anchor_subdiff(double v, double c) {
    const double lo_a = std::min(0.0, c);
    const double hi_a = std::max(0.0, c);
    const double atol = 1e-11 * (1.0 + std::abs(v) + std::abs(c));
    const bool at_lo = std::abs(v - lo_a) <= atol;
    const bool at_hi = std::abs(v - hi_a) <= atol;
    if (at_lo && at_hi) return {-2.0, 2.0};
    if (at_lo) return {-2.0, 0.0};
    if (at_hi) return {0.0, 2.0};
    if (v < lo_a) return {-2.0, -2.0};
    if (v > hi_a) return {2.0, 2.0};
    return {0.0, 0.0};
}

}  // namespace

Interval a_multimap(const L1EnvelopeProblem& p, double pval) {
    double q = (dot(p.x, p.theta) - (1.0 - p.y) * pval) / p.y;
    if (p.loss.kind == LossKind::Hinge) {
        // back-solve candidates land on the hinge kinks up to roundoff; a few
        // ulp of drift would collapse the subdifferential to one endpoint
        if (std::abs(pval + 1.0) <= 1e-11 * (1.0 + std::abs(pval))) pval = -1.0;
        if (std::abs(q - 1.0) <= 1e-11 * (1.0 + std::abs(q))) q = 1.0;
    }
    const Interval i0 = loss_subdifferential(p.loss, pval, 0.0);
    const Interval i1 = loss_subdifferential(p.loss, q, 1.0);
    return i0 - i1;
}

L1Box effective_box(const L1EnvelopeProblem& p) {
    const std::size_t m = p.theta.size();
    L1Box box;
    box.b_prime.resize(m);
    box.t_prime.resize(m);
    const double y = p.y;
    for (std::size_t i = 0; i < m; ++i) {
        // xi_{theta,1-y} of the opposite original bound
        const double from_t =
            std::isinf(p.upper[i]) ? -kInf : (p.theta[i] - y * p.upper[i]) / (1.0 - y);
        const double from_b =
            std::isinf(p.lower[i]) ? kInf : (p.theta[i] - y * p.lower[i]) / (1.0 - y);
        double b = std::max(p.lower[i], from_t);
        double t = std::min(p.upper[i], from_b);
        if (b > t) {
            // theta on the box boundary can invert the interval by rounding
            const double s = 1e-9 * (1.0 + std::abs(b) + std::abs(t));
            if (b - t > s) throw numeric_error("l1 envelope: empty effective box");
            b = t = 0.5 * (b + t);
        }
        box.b_prime[i] = b;
        box.t_prime[i] = t;
    }
    return box;
}

Vec theta_prime_projection(const L1EnvelopeProblem& p, const L1Box& box) {
    const std::size_t m = p.theta.size();
    Vec v(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool same = (p.theta[i] > 0.0) == (p.x[i] > 0.0);
        const double anchor = same ? 0.0 : p.theta[i] / (1.0 - p.y);
        v[i] = std::clamp(anchor, box.b_prime[i], box.t_prime[i]);
    }
    return v;
}

bool l1_guard(const L1EnvelopeProblem& p, const Vec& V) {
    const double xmax = norm_inf(p.x);
    if (xmax == 0.0) return true;
    const Interval a = a_multimap(p, dot(p.x, V));
    const double bound = 2.0 / (p.C * xmax);
    return a.lo <= bound + 1e-12 && a.hi >= -bound - 1e-12;
}

bool l1_stationary(const L1EnvelopeProblem& p, const L1Box& box, const Vec& V) {
    const Interval a = a_multimap(p, dot(p.x, V));
    const double rtol = 1e-9 * (1.0 + p.loss.c0 + p.loss.c1);
    double rlo = a.lo;
    double rhi = a.hi;
    for (std::size_t i = 0; i < V.size(); ++i) {
        const double c = p.theta[i] / (1.0 - p.y);
        const Interval T = two_anchor_subdiff(V[i], c);
        const double btol =
            1e-11 * (1.0 + std::abs(V[i]) + std::abs(box.b_prime[i]) + std::abs(box.t_prime[i]));
        const bool at_lower = V[i] <= box.b_prime[i] + btol;
        const bool at_upper = V[i] >= box.t_prime[i] - btol;
        // allowed values of s = C r x_i, from 0 in T + s + N_box
        double slo = at_upper ? -kInf : -T.hi;
        double shi = at_lower ? kInf : -T.lo;
        if (p.x[i] == 0.0) {
            if (slo > rtol || shi < -rtol) return false;
            continue;
        }
        const double d = p.C * p.x[i];
        double lo = slo / d;
        double hi = shi / d;
        if (d < 0.0) std::swap(lo, hi);
        rlo = std::max(rlo, lo);
        rhi = std::min(rhi, hi);
        if (rlo > rhi + rtol) return false;
    }
    return true;
}

std::vector<double> solve_z_l1_candidates(const L1EnvelopeProblem& p, const Vec& V,
                                          int k) {
    const double xk = p.x[static_cast<std::size_t>(k)];
    const double xk2 = xk * xk;
    const double y = p.y;
    const double v0 = dot(p.x, V);
    std::vector<double> zs;
    if (p.loss.kind == LossKind::Hinge) {
        // kink of the unlabeled slope at p = -1
        zs.push_back((1.0 + v0) / xk2);
        // kink of the labeled slope at q = 1
        zs.push_back((y - dot(p.x, p.theta) + (1.0 - y) * v0) / ((1.0 - y) * xk2));
        // sign variant of the previous, kept as an extra candidate
        zs.push_back((y + dot(p.x, p.theta) - (1.0 - y) * v0) / ((1.0 - y) * xk2));
    } else if (p.loss.kind == LossKind::SquaredHinge) {
        const double v1 = -dot(p.x, xi_of(p, V));
        const double cx = p.C * std::abs(xk);
        // labeled side inactive
        zs.push_back((1.0 + v0 - 2.0 / (cx * p.loss.c0)) / xk2);
        // unlabeled side inactive
        zs.push_back(y * (1.0 + v1 - 2.0 / (cx * p.loss.c1)) / ((1.0 - y) * xk2));
        zs.push_back((1.0 + v1 - 2.0 / (cx * p.loss.c1)) / xk2);
        // both sides active
        zs.push_back(y *
                     (p.loss.c0 * (1.0 + v0) + p.loss.c1 * (1.0 + v1) - 2.0 / cx) /
                     ((y * p.loss.c0 + (1.0 - y) * p.loss.c1) * xk2));
    } else {
        throw config_error("no closed-form z candidates for this loss");
    }
    return zs;
}

double l1_split_objective(const L1EnvelopeProblem& p, const Vec& V) {
    const Vec w = xi_of(p, V);
    const double d0 = norm1(V) + p.C * loss_value(p.loss, dot(p.x, V), 0.0);
    const double d1 = norm1(w) + p.C * loss_value(p.loss, dot(p.x, w), 1.0);
    return (1.0 - p.y) * d0 + p.y * d1;
}

namespace {

double guard_gap(const L1EnvelopeProblem& p, const Vec& V, double xmax) {
    const Interval a = a_multimap(p, dot(p.x, V));
    return std::max(0.0, a.lo * p.C * xmax - 2.0);
}

// Place coordinate k between its bound and the rest of the effective box so
// that the whole point becomes stationary.  Returns true on success.
bool back_solve(const L1EnvelopeProblem& p, const L1Box& box, Vec& V, int k) {
    const auto ku = static_cast<std::size_t>(k);
    const double xk = p.x[ku];
    const double blo = box.b_prime[ku];
    const double bhi = box.t_prime[ku];
    std::vector<double> zs;
    if (p.loss.kind == LossKind::Logistic) {
        // a(<x,V> - z x_k) is continuous and non-increasing in z; bisect
        // |a C x_k| = 2 over the z-range that keeps V_k inside the box.
        const double za = (V[ku] - blo) / xk;
        const double zb = (V[ku] - bhi) / xk;
        double zlo = std::min(za, zb);
        double zhi = std::max(za, zb);
        auto g = [&](double z) {
            const Interval a = a_multimap(p, dot(p.x, V) - z * xk * xk);
            return std::abs(a.mid()) * p.C * std::abs(xk) - 2.0;
        };
        if (g(zlo) < -1e-12 || g(zhi) > 1e-12) return false;
        zs.push_back(bisect_decreasing(g, zlo, zhi, 1e-12 * (1.0 + zhi - zlo), 300));
    } else {
        zs = solve_z_l1_candidates(p, V, k);
    }
    const double vk = V[ku];
    bool found = false;
    double best_obj = kInf;
    double best_vk = vk;
    for (double z : zs) {
        if (!std::isfinite(z)) continue;
        const double cand = vk - z * xk;
        const double btol = 1e-9 * (1.0 + std::abs(cand));
        if (cand < blo - btol || cand > bhi + btol) continue;
        V[ku] = std::clamp(cand, blo, bhi);
        if (l1_stationary(p, box, V)) {
            const double obj = l1_split_objective(p, V);
            if (!found || obj < best_obj) {
                found = true;
                best_obj = obj;
                best_vk = V[ku];
            }
        }
    }
    V[ku] = found ? best_vk : vk;
    return found;
}

}  // namespace

AuxResult aux(const L1EnvelopeProblem& p, const L1Box& box, Vec V0) {
    const std::size_t m = V0.size();
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < m; ++i)
        if (p.x[i] != 0.0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double xa = std::abs(p.x[a]);
        const double xb = std::abs(p.x[b]);
        if (xa != xb) return xa > xb;
        return a < b;
    });

    const double xmax = norm_inf(p.x);
    AuxResult res;
    res.V = std::move(V0);
    res.guard_gap_trace.push_back(guard_gap(p, res.V, xmax));

    for (std::size_t i : order) {
        if (l1_stationary(p, box, res.V)) return res;
        res.V[i] = p.x[i] > 0.0 ? box.b_prime[i] : box.t_prime[i];
        res.guard_gap_trace.push_back(guard_gap(p, res.V, xmax));
        if (l1_stationary(p, box, res.V)) return res;
        if (back_solve(p, box, res.V, static_cast<int>(i))) {
            res.guard_gap_trace.push_back(guard_gap(p, res.V, xmax));
            return res;
        }
    }
    if (!l1_stationary(p, box, res.V))
        throw numeric_error("l1 envelope: coordinate sweep failed to reach a minimizer");
    return res;
}

L1Solution l1_envelope_value(const L1EnvelopeProblem& p) {
    check_problem(p);
    L1Solution sol;
    if (norm_inf(p.x) == 0.0) {
        sol.theta0 = p.theta;
        sol.theta1 = p.theta;
        const double d0 = norm1(p.theta) + p.C * loss_value(p.loss, 0.0, 0.0);
        const double d1 = norm1(p.theta) + p.C * loss_value(p.loss, 0.0, 1.0);
        sol.value = (1.0 - p.y) * d0 + p.y * d1;
        return sol;
    }
    const L1Box box = effective_box(p);
    const AuxResult r = aux(p, box, theta_prime_projection(p, box));
    sol.theta0 = r.V;
    sol.theta1 = xi_of(p, r.V);
    sol.value = l1_split_objective(p, r.V);
    return sol;
}

}  // namespace cvxext
