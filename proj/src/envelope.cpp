#include "cvxext/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxext/errors.hpp"
#include "cvxext/interval.hpp"

namespace cvxext {

namespace {

constexpr double kYTol = 1e-12;     // integer-branch tolerance on y
constexpr double kHuge = 1e30;      // sentinel for half-infinite intervals
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_zero_label(double y) { return y <= kYTol; }
bool is_one_label(double y) { return y >= 1.0 - kYTol; }

// omega = s ||theta||_2^2 with s in {1, 1/2}, or ||theta||_1
double reg_scale(const RegularizerSpec& reg) {
    return reg.kind == RegKind::L2 && reg.half ? 0.5 : 1.0;
}

void check_point(const TermExtension& ext, const Vec& theta, double y) {
    validate(ext.loss);
    if (ext.x.size() != theta.size())
        throw domain_error("envelope: x and theta dimensions differ");
    if (!(y >= 0.0) || !(y <= 1.0))
        throw domain_error("envelope: label outside [0, 1]");
    if (!(ext.C >= 0.0)) throw config_error("envelope: C must be nonnegative");
}

double partial_c_tilde(const TermExtension& ext) {
    // d = s [ ||theta||^2 - (C c / s) <x,theta> y ] with c = c0 = c1
    return ext.C * ext.loss.c0 / reg_scale(ext.reg);
}

}  // namespace

// Midpoint element of the theta-subdifferential of d(., y) at theta for an
// integer label, regularizer included per the term.
Vec term_integer_subgradient(const TermExtension& ext, const Vec& theta, double y01) {
    const std::size_t m = theta.size();
    Vec v(m, 0.0);
    if (ext.method == ExtensionMethod::LogisticPartial) {
        const double s = reg_scale(ext.reg);
        for (std::size_t i = 0; i < m; ++i)
            v[i] = 2.0 * s * theta[i] - ext.C * ext.loss.c0 * ext.x[i] * y01;
        return v;
    }
    if (ext.include_reg) {
        const std::vector<Interval> dr = regularizer_subdifferential(ext.reg, theta);
        for (std::size_t i = 0; i < m; ++i) v[i] = dr[i].mid();
    }
    const double g = loss_subdifferential(ext.loss, dot(ext.x, theta), y01).mid();
    for (std::size_t i = 0; i < m; ++i) v[i] += ext.C * g * ext.x[i];
    return v;
}

namespace {

bool degenerate_loss_part(const TermExtension& ext) {
    return ext.C == 0.0 || norm_inf(ext.x) == 0.0;
}

// When the loss part cannot vary with the split (x = 0 or C = 0), the
// envelope is the linear interpolation at theta0 = theta1 = theta.
EnvelopeEval degenerate_eval(const TermExtension& ext, const Vec& theta, double y) {
    EnvelopeEval e;
    e.theta0 = theta;
    e.theta1 = theta;
    e.value = (1.0 - y) * term_d_value(ext, theta, 0.0) +
              y * term_d_value(ext, theta, 1.0);
    return e;
}

double pick_element(Interval I) {
    const bool lo_inf = I.lo <= -kHuge / 2;
    const bool hi_inf = I.hi >= kHuge / 2;
    if (lo_inf && hi_inf) return 0.0;
    if (lo_inf || hi_inf) return std::clamp(0.0, I.lo, I.hi);
    return I.mid();
}

// Subdifferential of |.| at v plus the normal cone of [b, t] at v.
Interval abs_subdiff_with_cone(double v, double b, double t) {
    const double atol = 1e-11 * (1.0 + std::abs(v));
    Interval I = std::abs(v) <= atol ? Interval{-1.0, 1.0}
                 : v > 0.0            ? Interval{1.0, 1.0}
                                      : Interval{-1.0, -1.0};
    if (std::isfinite(b) && v <= b + atol) I.lo = -kHuge;
    if (std::isfinite(t) && v >= t - atol) I.hi = kHuge;
    return I;
}

Interval intersect_or_widen(Interval a, Interval b, double eps, const char* what) {
    bool ok = false;
    Interval r = intersect(a, b, ok);
    if (!ok) {
        a.lo -= eps; a.hi += eps;
        b.lo -= eps; b.hi += eps;
        r = intersect(a, b, ok);
    }
    if (!ok) throw numeric_error(std::string("envelope subgradient: empty ") + what);
    return r;
}

}  // namespace

const char* to_string(ExtensionMethod m) {
    switch (m) {
        case ExtensionMethod::Trivial: return "trivial";
        case ExtensionMethod::ClosedFormL2: return "closed_form_l2";
        case ExtensionMethod::BisectionL2: return "bisection_l2";
        case ExtensionMethod::ClosedFormL1: return "closed_form_l1";
        case ExtensionMethod::LogisticPartial: return "logistic_partial";
    }
    return "?";
}

Vec xi_map(const Vec& theta, double y, const Vec& t) {
    if (y == 0.0) throw domain_error("xi_map: y must be positive");
    if (theta.size() != t.size()) throw domain_error("xi_map: dimension mismatch");
    Vec r(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
        r[i] = (theta[i] - (1.0 - y) * t[i]) / y;
    return r;
}

double term_d_value(const TermExtension& ext, const Vec& theta, double y) {
    if (ext.method == ExtensionMethod::LogisticPartial) {
        const double s = reg_scale(ext.reg);
        return s * norm2sq(theta) - ext.C * ext.loss.c0 * dot(ext.x, theta) * y;
    }
    double v = ext.C * loss_value(ext.loss, dot(ext.x, theta), y);
    if (ext.include_reg) v += regularizer_value(ext.reg, theta);
    return v;
}

double trivial_extension_value(const TermExtension& ext, const Vec& theta, double y) {
    if (is_zero_label(y)) return term_d_value(ext, theta, 0.0);
    if (is_one_label(y)) return term_d_value(ext, theta, 1.0);
    return 0.0;
}

double logistic_partial_extension_value(double C, const Vec& x, const Vec& theta,
                                        double y) {
    if (x.size() != theta.size())
        throw domain_error("logistic_partial: dimension mismatch");
    double shifted = 0.0, a2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ai = 0.5 * C * x[i];
        const double di = theta[i] - y * ai;
        shifted += di * di;
        a2 += ai * ai;
    }
    return shifted - y * a2;
}

EnvelopeEval envelope_eval(const TermExtension& ext, const Vec& theta, double y) {
    check_point(ext, theta, y);
    EnvelopeEval e;
    if (is_zero_label(y) || is_one_label(y)) {
        e.theta0 = theta;
        e.theta1 = theta;
        e.value = term_d_value(ext, theta, is_one_label(y) ? 1.0 : 0.0);
        return e;
    }
    switch (ext.method) {
        case ExtensionMethod::Trivial:
            e.theta0 = theta;
            e.theta1 = theta;
            e.value = 0.0;
            return e;
        case ExtensionMethod::LogisticPartial: {
            const double s = reg_scale(ext.reg);
            e.theta0 = theta;
            e.theta1 = theta;
            e.value = s * logistic_partial_extension_value(partial_c_tilde(ext),
                                                           ext.x, theta, y);
            return e;
        }
        case ExtensionMethod::ClosedFormL2:
        case ExtensionMethod::BisectionL2: {
            if (!ext.include_reg)
                throw config_error("l2 envelope method without regularizer in the term");
            if (degenerate_loss_part(ext)) return degenerate_eval(ext, theta, y);
            const double twos = 2.0 * reg_scale(ext.reg);
            L2EnvelopeProblem q{ext.x, ext.C / twos, ext.loss, theta, y};
            const L2Solution sol = solve_l2_envelope(q);
            e.value = twos * sol.value;
            e.theta0 = sol.theta0;
            e.theta1 = sol.theta1;
            e.has_split = true;
            return e;
        }
        case ExtensionMethod::ClosedFormL1: {
            if (!ext.include_reg)
                throw config_error("l1 envelope method without regularizer in the term");
            if (degenerate_loss_part(ext)) return degenerate_eval(ext, theta, y);
            L1EnvelopeProblem q{ext.x,
                                ext.C,
                                ext.loss,
                                theta,
                                y,
                                box_lower(ext.reg, theta.size()),
                                box_upper(ext.reg, theta.size())};
            const L1Solution sol = l1_envelope_value(q);
            e.value = sol.value;
            e.theta0 = sol.theta0;
            e.theta1 = sol.theta1;
            e.has_split = true;
            return e;
        }
    }
    throw config_error("envelope: unknown extension method");
}

double envelope_value(const TermExtension& ext, const Vec& theta, double y) {
    return envelope_eval(ext, theta, y).value;
}

SubgradientPair envelope_subgradient(const TermExtension& ext, const Vec& theta,
                                     double y) {
    check_point(ext, theta, y);
    SubgradientPair sg;
    if (is_zero_label(y) || is_one_label(y)) {
        const double y01 = is_one_label(y) ? 1.0 : 0.0;
        sg.v = term_integer_subgradient(ext, theta, y01);
        sg.w = y01 == 0.0 ? kInf : -kInf;
        return sg;
    }
    const std::size_t m = theta.size();
    switch (ext.method) {
        case ExtensionMethod::Trivial:
            sg.v.assign(m, 0.0);
            sg.w = 0.0;
            return sg;
        case ExtensionMethod::LogisticPartial: {
            const double s = reg_scale(ext.reg);
            const double ct = partial_c_tilde(ext);
            sg.v.resize(m);
            double adiff = 0.0, a2 = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double ai = 0.5 * ct * ext.x[i];
                const double di = theta[i] - y * ai;
                sg.v[i] = 2.0 * s * di;
                adiff += ai * di;
                a2 += ai * ai;
            }
            sg.w = s * (-2.0 * adiff - a2);
            return sg;
        }
        default: break;
    }
    if (degenerate_loss_part(ext)) {
        // envelope is (1-y) d0(theta) + y d1(theta)
        sg.v = term_integer_subgradient(ext, theta, 0.0);
        const Vec v1 = term_integer_subgradient(ext, theta, 1.0);
        for (std::size_t i = 0; i < m; ++i)
            sg.v[i] = (1.0 - y) * sg.v[i] + y * v1[i];
        sg.w = term_d_value(ext, theta, 1.0) - term_d_value(ext, theta, 0.0);
        return sg;
    }
    if (ext.method == ExtensionMethod::ClosedFormL2 ||
        ext.method == ExtensionMethod::BisectionL2) {
        const double twos = 2.0 * reg_scale(ext.reg);
        const double chat = ext.C / twos;
        L2EnvelopeProblem q{ext.x, chat, ext.loss, theta, y};
        const L2Solution sol = solve_l2_envelope(q);
        const double eps = 1e-8 * (1.0 + std::abs(sol.z));
        const double g0 =
            intersect_or_widen(sol.g0, sol.g1 + sol.z, eps, "loss-slope set").mid();
        sg.v.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            sg.v[i] = twos * (sol.theta0[i] + chat * g0 * ext.x[i]);
        sg.w = dot(sg.v, sol.theta0) - dot(sg.v, sol.theta1) +
               term_d_value(ext, sol.theta1, 1.0) - term_d_value(ext, sol.theta0, 0.0);
        return sg;
    }
    // ClosedFormL1: recover a common element of the two subdifferentials.
    // v = sigma0 + C g0 x = sigma1 + C g1 x with sigma from |.| plus box
    // normal cones, g from the loss.  Writing u = g0 - g1, feasibility per
    // coordinate reads C u x_i in I1_i - I0_i, plus u in J0 - J1.
    L1EnvelopeProblem q{ext.x,
                        ext.C,
                        ext.loss,
                        theta,
                        y,
                        box_lower(ext.reg, m),
                        box_upper(ext.reg, m)};
    const L1Solution sol = l1_envelope_value(q);
    double r0 = dot(ext.x, sol.theta0);
    double r1 = dot(ext.x, sol.theta1);
    if (ext.loss.kind == LossKind::Hinge) {
        // optimal splits sit on the hinge kinks up to roundoff
        if (std::abs(r0 + 1.0) <= 1e-11 * (1.0 + std::abs(r0))) r0 = -1.0;
        if (std::abs(r1 - 1.0) <= 1e-11 * (1.0 + std::abs(r1))) r1 = 1.0;
    }
    const Interval J0 = loss_subdifferential(ext.loss, r0, 0.0);
    const Interval J1 = loss_subdifferential(ext.loss, r1, 1.0);
    std::vector<Interval> I0(m), I1(m);
    for (std::size_t i = 0; i < m; ++i) {
        I0[i] = abs_subdiff_with_cone(sol.theta0[i], q.lower[i], q.upper[i]);
        I1[i] = abs_subdiff_with_cone(sol.theta1[i], q.lower[i], q.upper[i]);
    }
    Interval U = J0 - J1;
    const double ueps = 1e-8 * (1.0 + ext.loss.c0 + ext.loss.c1);
    for (std::size_t i = 0; i < m; ++i) {
        if (ext.x[i] == 0.0) continue;
        const Interval D = (I1[i] - I0[i]) * (1.0 / (ext.C * ext.x[i]));
        U = intersect_or_widen(U, D, ueps, "slope-difference set");
    }
    const double u = pick_element(U);
    const double g0 = pick_element(intersect_or_widen(J0, J1 + u, ueps, "g0 set"));
    const double g1 = g0 - u;
    sg.v.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Interval A = I0[i] + ext.C * g0 * ext.x[i];
        const Interval B = I1[i] + ext.C * g1 * ext.x[i];
        sg.v[i] = pick_element(intersect_or_widen(A, B, ueps, "coordinate set"));
    }
    sg.w = dot(sg.v, sol.theta0) - dot(sg.v, sol.theta1) +
           term_d_value(ext, sol.theta1, 1.0) - term_d_value(ext, sol.theta0, 0.0);
    return sg;
}

}  // namespace cvxext
