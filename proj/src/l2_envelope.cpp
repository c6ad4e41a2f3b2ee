#include "cvxext/l2_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxext/errors.hpp"
#include "cvxext/minimize.hpp"

namespace cvxext {

namespace {

constexpr double kValidateTol = 1e-9;

void check_problem(const L2EnvelopeProblem& p) {
    if (!(p.y > 0.0 && p.y < 1.0))
        throw domain_error("l2 envelope: label must be strictly fractional");
    if (!(p.C > 0.0)) throw domain_error("l2 envelope: C must be positive");
    if (norm2sq(p.x) == 0.0) throw domain_error("l2 envelope: x must be nonzero");
    if (p.x.size() != p.theta.size())
        throw domain_error("l2 envelope: dimension mismatch");
}

struct Margins {
    double r0, r1;
};

Margins margins_at(const L2EnvelopeProblem& p, double z) {
    const double X = norm2sq(p.x);
    const double rt = dot(p.x, p.theta);
    return {rt - p.y * p.C * X * z, rt + (1.0 - p.y) * p.C * X * z};
}

double psi_at(const L2EnvelopeProblem& p, double z, Vec& theta0, Vec& theta1) {
    theta0 = axpy(p.theta, -p.y * p.C * z, p.x);
    theta1 = axpy(p.theta, (1.0 - p.y) * p.C * z, p.x);
    const double d0 = 0.5 * norm2sq(theta0) + p.C * loss_value(p.loss, dot(p.x, theta0), 0);
    const double d1 = 0.5 * norm2sq(theta1) + p.C * loss_value(p.loss, dot(p.x, theta1), 1);
    return (1.0 - p.y) * d0 + p.y * d1;
}

// Kink-crossing candidates place a margin on a hinge kink up to roundoff;
// a few ulp of drift would collapse the subdifferential to one endpoint,
// rejecting the true root and starving the subgradient recovery.
Margins snapped_margins(const L2EnvelopeProblem& p, double z) {
    Margins m = margins_at(p, z);
    if (p.loss.kind == LossKind::Hinge) {
        const double snap = 1e-12 * (1.0 + std::fabs(dot(p.x, p.theta)) +
                                     std::fabs(z) * p.C * norm2sq(p.x));
        if (std::fabs(m.r0 + 1.0) <= snap) m.r0 = -1.0;
        if (std::fabs(m.r1 - 1.0) <= snap) m.r1 = 1.0;
    }
    return m;
}

L2Solution finish(const L2EnvelopeProblem& p, double z) {
    L2Solution s;
    s.z = z;
    s.value = psi_at(p, z, s.theta0, s.theta1);
    const Margins m = snapped_margins(p, z);
    s.g0 = loss_subdifferential(p.loss, m.r0, 0);
    s.g1 = loss_subdifferential(p.loss, m.r1, 1);
    return s;
}

}  // namespace

Interval l2_root_residual(const L2EnvelopeProblem& p, double z) {
    const Margins m = snapped_margins(p, z);
    const Interval d0 = loss_subdifferential(p.loss, m.r0, 0);
    const Interval d1 = loss_subdifferential(p.loss, m.r1, 1);
    return d0 - d1 - z;
}

std::vector<double> l2_candidates(const L2EnvelopeProblem& p) {
    const double X = norm2sq(p.x);
    const double rt = dot(p.x, p.theta);
    const double c0 = p.loss.c0, c1 = p.loss.c1;
    const double y = p.y, C = p.C;
    switch (p.loss.kind) {
        case LossKind::Hinge:
            // Flat pieces of the piecewise-constant residual plus the two
            // kink crossings r0 = -1 and r1 = 1.
            return {0.0, c0, c1, c0 + c1,
                    (1.0 + rt) / (y * C * X),
                    (1.0 - rt) / ((1.0 - y) * C * X)};
        case LossKind::SquaredHinge:
            // Linear pieces by which hinge halves are active.
            return {0.0,
                    (c0 + c0 * rt) / (1.0 + c0 * y * C * X),
                    (c1 - c1 * rt) / (1.0 + c1 * (1.0 - y) * C * X),
                    (c0 + c1 + (c0 - c1) * rt) /
                        (1.0 + (c0 * y + c1 * (1.0 - y)) * C * X)};
        default:
            throw config_error("l2_candidates: closed forms exist only for hinge losses");
    }
}

L2Solution solve_l2_envelope(const L2EnvelopeProblem& p) {
    check_problem(p);
    if (p.loss.kind == LossKind::Hinge || p.loss.kind == LossKind::SquaredHinge) {
        const std::vector<double> cands = l2_candidates(p);
        double best_z = 0.0, best_val = std::numeric_limits<double>::infinity();
        bool any = false;
        for (double z : cands) {
            if (!std::isfinite(z)) continue;
            const Interval r = l2_root_residual(p, z);
            const double scale = 1.0 + std::fabs(z);
            if (r.distance(0.0) > kValidateTol * scale) continue;
            Vec t0, t1;
            const double val = psi_at(p, z, t0, t1);
            if (!any || val < best_val) {
                any = true;
                best_val = val;
                best_z = z;
            }
        }
        if (!any)
            throw numeric_error("solve_l2_envelope: no closed-form candidate validates");
        return finish(p, best_z);
    }

    // Logistic / squared difference: the residual midpoint is strictly
    // decreasing in z, so bisection applies.
    const double X = norm2sq(p.x);
    const double rt = dot(p.x, p.theta);
    auto g = [&](double z) { return l2_root_residual(p, z).mid(); };
    double B = 2.0 * (p.loss.c0 + p.loss.c1) +
               2.0 * std::fabs(rt) / (std::min(p.y, 1.0 - p.y) * p.C * X + 1e-300);
    if (p.loss.kind == LossKind::SquaredDifference)
        B = std::max(B, 2.0 + 2.0 * std::fabs(rt));
    int doublings = 0;
    while ((g(-B) < 0.0 || g(B) > 0.0) && doublings < 70) {
        B *= 2.0;
        ++doublings;
    }
    if (g(-B) < 0.0 || g(B) > 0.0)
        throw numeric_error("solve_l2_envelope: bisection bracket not found");
    const double z = bisect_decreasing(g, -B, B, 1e-10, 200);
    return finish(p, z);
}

}  // namespace cvxext
