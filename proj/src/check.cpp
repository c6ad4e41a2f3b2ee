#include "cvxext/check.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cvxext/envelope.hpp"
#include "cvxext/errors.hpp"
#include "cvxext/io.hpp"
#include "cvxext/l1_envelope.hpp"
#include "cvxext/l2_envelope.hpp"
#include "cvxext/oracle.hpp"

namespace cvxext {

namespace {

double uni(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

double signed_uni(std::mt19937_64& g, double lo, double hi) {
    const double v = uni(g, lo, hi);
    return uni(g, 0.0, 1.0) < 0.5 ? -v : v;
}

constexpr int kImplCount = 8;

const char* impl_name(int impl) {
    static const char* names[kImplCount] = {
        "hinge+l2",    "squared_hinge+l2", "logistic+l2",      "hinge+l1",
        "squared_hinge+l1", "logistic+l1",  "trivial",          "logistic-partial"};
    return names[impl];
}

// One random configuration of the numbered implementation.
TermExtension draw_impl(int impl, int m, std::mt19937_64& g) {
    TermExtension e;
    e.C = uni(g, 0.5, 6.0);
    e.x.resize(m);
    for (int i = 0; i < m; ++i) e.x[i] = signed_uni(g, 0.3, 2.0);
    e.loss.c0 = uni(g, 0.5, 2.5);
    e.loss.c1 = uni(g, 0.5, 2.5);
    e.include_reg = true;
    e.reg.kind = RegKind::L2;
    e.reg.half = true;

    const int loss_of[kImplCount] = {0, 1, 2, 0, 1, 2, 0, 2};
    const LossKind kinds[3] = {LossKind::Hinge, LossKind::SquaredHinge, LossKind::Logistic};
    e.loss.kind = kinds[loss_of[impl]];

    if (impl < 3) {
        e.method = e.loss.kind == LossKind::Logistic ? ExtensionMethod::BisectionL2
                                                     : ExtensionMethod::ClosedFormL2;
    } else if (impl < 6) {
        e.method = ExtensionMethod::ClosedFormL1;
        e.reg.kind = RegKind::L1;
        e.reg.half = false;
        e.reg.lower.resize(m);
        e.reg.upper.resize(m);
        for (int i = 0; i < m; ++i) {
            e.reg.lower[i] = -uni(g, 2.0, 5.0);
            e.reg.upper[i] = uni(g, 2.0, 5.0);
        }
    } else if (impl == 6) {
        e.method = ExtensionMethod::Trivial;
        e.include_reg = false;
    } else {
        e.method = ExtensionMethod::LogisticPartial;
        e.loss.c1 = e.loss.c0;
    }
    return e;
}

Vec draw_theta(const TermExtension& e, std::mt19937_64& g, double margin = 0.1) {
    const int m = static_cast<int>(e.x.size());
    const Vec lo = box_lower(e.reg, m), hi = box_upper(e.reg, m);
    Vec t(m);
    for (int i = 0; i < m; ++i)
        t[i] = uni(g, std::max(lo[i] + margin, -3.0), std::min(hi[i] - margin, 3.0));
    return t;
}

std::string describe(const TermExtension& e, int impl) {
    std::ostringstream os;
    os << impl_name(impl) << " C=" << format_real(e.C) << " c0=" << format_real(e.loss.c0)
       << " c1=" << format_real(e.loss.c1) << " x=";
    for (std::size_t i = 0; i < e.x.size(); ++i)
        os << (i ? "," : "") << format_real(e.x[i]);
    return os.str();
}

}  // namespace

CheckReport check_extension_property(int grid_points, std::uint64_t seed) {
    CheckReport rep;
    rep.suite = "extension";
    rep.tolerance = 1e-9;
    std::mt19937_64 g(seed);
    for (int impl = 0; impl < kImplCount; ++impl) {
        for (int draw = 0; draw < 5; ++draw) {
            const TermExtension e = draw_impl(impl, 1, g);
            const Vec lo = box_lower(e.reg, 1), hi = box_upper(e.reg, 1);
            const double glo = std::max(lo[0], -4.0), ghi = std::min(hi[0], 4.0);
            for (int i = 0; i < grid_points; ++i) {
                const double t = glo + (ghi - glo) * i / (grid_points - 1);
                for (int y = 0; y <= 1; ++y) {
                    const double d = term_d_value(e, Vec{t}, y);
                    const double v = envelope_value(e, Vec{t}, y);
                    const double viol = std::abs(v - d) / (1.0 + std::abs(d));
                    ++rep.cases;
                    if (viol > rep.max_violation) {
                        rep.max_violation = viol;
                        std::ostringstream os;
                        os << describe(e, impl) << " theta=" << format_real(t) << " y=" << y;
                        rep.worst = os.str();
                    }
                }
            }
        }
    }
    rep.pass = rep.max_violation <= rep.tolerance;
    return rep;
}

CheckReport check_oracle_equivalence(int instances_per_combo, int m, std::uint64_t seed) {
    CheckReport rep;
    rep.suite = "oracle";
    rep.tolerance = 1.0;  // per-case deviation / per-case tolerance
    std::mt19937_64 g(seed);

    struct Combo {
        LossKind loss;
        bool l1 = false;
    };
    const Combo combos[] = {{LossKind::Hinge}, {LossKind::SquaredHinge},
                            {LossKind::Logistic}, {LossKind::SquaredDifference},
                            {LossKind::Hinge, true}, {LossKind::SquaredHinge, true},
                            {LossKind::Logistic, true}};

    for (const Combo& combo : combos) {
        for (int rep_i = 0; rep_i < instances_per_combo; ++rep_i) {
            int impl;
            if (combo.l1)
                impl = combo.loss == LossKind::Hinge ? 3
                       : combo.loss == LossKind::SquaredHinge ? 4 : 5;
            else
                impl = combo.loss == LossKind::Hinge ? 0
                       : combo.loss == LossKind::SquaredHinge ? 1 : 2;
            TermExtension e = draw_impl(impl, m, g);
            if (combo.loss == LossKind::SquaredDifference) {
                e.loss.kind = LossKind::SquaredDifference;
                e.method = ExtensionMethod::BisectionL2;
            }
            const Vec theta = draw_theta(e, g);
            const double y = uni(g, 0.05, 0.95);

            const double ev = envelope_value(e, theta, y);

            const Vec lo = box_lower(e.reg, m), hi = box_upper(e.reg, m);
            auto inside = [&](const Vec& t) {
                for (int i = 0; i < m; ++i)
                    if (t[i] < lo[i] - 1e-12 || t[i] > hi[i] + 1e-12) return false;
                return true;
            };
            ScalarField d0 = [&](const Vec& t) {
                return inside(t) ? term_d_value(e, t, 0) : 1e30;
            };
            ScalarField d1 = [&](const Vec& t) {
                return inside(t) ? term_d_value(e, t, 1) : 1e30;
            };
            double ov;
            if (combo.l1) {
                GridSpec grid;
                grid.lo = lo;
                grid.hi = hi;
                grid.step = 1e-2;
                grid.refine_rounds = 2;
                ov = oracle_psi(d0, d1, theta, y, grid);
            } else {
                ov = oracle_psi_auto(d0, d1, theta, y, 1e-2);
            }

            const double tol = combo.loss == LossKind::Logistic ? 1e-3 : 1e-4;
            const double viol = std::abs(ev - ov) / tol;
            ++rep.cases;
            if (viol > rep.max_violation) {
                rep.max_violation = viol;
                std::ostringstream os;
                os << describe(e, impl) << " y=" << format_real(y)
                   << " envelope=" << format_real(ev) << " oracle=" << format_real(ov);
                rep.worst = os.str();
            }
        }
    }
    rep.pass = rep.max_violation <= rep.tolerance;
    return rep;
}

CheckReport check_convexity(int triples, std::uint64_t seed) {
    CheckReport rep;
    rep.suite = "convexity";
    rep.tolerance = 1e-8;
    std::mt19937_64 g(seed);
    const int draws_per_impl = 2;
    const int per_draw = triples / (kImplCount * draws_per_impl) + 1;
    for (int impl = 0; impl < kImplCount; ++impl) {
        for (int draw = 0; draw < draws_per_impl; ++draw) {
            const TermExtension e = draw_impl(impl, 1, g);
            const Vec blo = box_lower(e.reg, 1), bhi = box_upper(e.reg, 1);
            const Vec lo{std::max(blo[0], -4.0), 0.0};
            const Vec hi{std::min(bhi[0], 4.0), 1.0};
            ScalarField f = [&](const Vec& p) {
                return envelope_value(e, Vec{p[0]}, p[1]);
            };
            const double viol = oracle_convexity(f, lo, hi, per_draw, seed + impl * 31 + draw);
            rep.cases += per_draw;
            if (viol > rep.max_violation) {
                rep.max_violation = viol;
                rep.worst = describe(e, impl);
            }
        }
    }
    rep.pass = rep.max_violation <= rep.tolerance;
    return rep;
}

CheckReport check_raw_nonconvexity(int triples, std::uint64_t seed) {
    CheckReport rep;
    rep.suite = "convexity(raw objective)";
    rep.tolerance = 0.01;  // pass means a violation ABOVE this was found
    ScalarField raw = [](const Vec& p) {
        const double theta = p[0], y = p[1];
        return 0.5 * theta * theta + 5.0 * std::max(0.0, 1.0 - (2.0 * y - 1.0) * theta);
    };
    rep.max_violation = oracle_convexity(raw, Vec{-3.0, 0.0}, Vec{3.0, 1.0},
                                         triples, seed);
    rep.cases = triples;
    rep.pass = rep.max_violation > rep.tolerance;
    rep.worst = "raw hinge objective with the label interpolated into the margin";
    return rep;
}

CheckReport check_subgradients(int pairs, std::uint64_t seed) {
    CheckReport rep;
    rep.suite = "subgradient";
    rep.tolerance = 1.0;  // normalized: slack/1e-8 and derivative mismatch/1e-5
    std::mt19937_64 g(seed);
    const int per_impl = pairs / kImplCount + 1;
    for (int impl = 0; impl < kImplCount; ++impl) {
        for (int c = 0; c < per_impl; ++c) {
            const int m = impl < 3 && c % 2 == 1 ? 2 : 1;
            const TermExtension e = draw_impl(impl, m, g);
            const Vec theta = draw_theta(e, g);
            const double y = uni(g, 0.02, 0.98);
            const double f = envelope_value(e, theta, y);
            const SubgradientPair sg = envelope_subgradient(e, theta, y);

            Vec theta2 = draw_theta(e, g);
            double y2 = uni(g, 0.0, 1.0);
            if (c % 10 == 0) y2 = std::round(y2);
            const double f2 = envelope_value(e, theta2, y2);
            double lin = f + sg.w * (y2 - y);
            for (int i = 0; i < m; ++i) lin += sg.v[i] * (theta2[i] - theta[i]);
            const double slack = f2 - lin;
            const double scale = 1.0 + std::abs(f) + std::abs(f2);
            double viol = std::max(0.0, -slack) / scale / 1e-8;

            // central differences on the smooth implementations
            if (impl == 2 || impl == 7) {
                const double h = 1e-4;
                for (int i = 0; i <= m; ++i) {
                    double fp, fm;
                    if (i < m) {
                        Vec tp = theta, tm = theta;
                        tp[i] += h;
                        tm[i] -= h;
                        fp = envelope_value(e, tp, y);
                        fm = envelope_value(e, tm, y);
                    } else {
                        fp = envelope_value(e, theta, std::min(y + h, 1.0 - 1e-6));
                        fm = envelope_value(e, theta, std::max(y - h, 1e-6));
                    }
                    const double fd = (fp - fm) / (2.0 * h);
                    const double got = i < m ? sg.v[i] : sg.w;
                    viol = std::max(viol, std::abs(fd - got) / (1.0 + std::abs(fd)) / 1e-5);
                }
            }

            ++rep.cases;
            if (viol > rep.max_violation) {
                rep.max_violation = viol;
                std::ostringstream os;
                os << describe(e, impl) << " y=" << format_real(y);
                rep.worst = os.str();
            }
        }
    }
    rep.pass = rep.max_violation <= rep.tolerance;
    return rep;
}

CheckReport check_candidate_completeness(int problems_per_combo, std::uint64_t seed) {
    CheckReport rep;
    rep.suite = "candidates";
    rep.tolerance = 1e-9;
    std::mt19937_64 g(seed);
    long long failures = 0;
    for (int combo = 0; combo < 4; ++combo) {
        const bool l1 = combo >= 2;
        const int impl = (combo % 2 == 0 ? 0 : 1) + (l1 ? 3 : 0);
        for (int c = 0; c < problems_per_combo; ++c) {
            const int m = 1 + c % 2;
            const TermExtension e = draw_impl(impl, m, g);
            const Vec theta = draw_theta(e, g);
            const double y = uni(g, 0.05, 0.95);
            try {
                if (!l1) {
                    // with half=true the term is already in the canonical
                    // d = 1/2||.||^2 + C l scale the direct problem expects
                    L2EnvelopeProblem p;
                    p.x = e.x;
                    p.C = e.C;
                    p.loss = e.loss;
                    p.theta = theta;
                    p.y = y;
                    const L2Solution sol = solve_l2_envelope(p);
                    const Interval res = l2_root_residual(p, sol.z);
                    const double viol = res.distance(0.0) / (1.0 + std::abs(sol.z));
                    if (viol > rep.max_violation) {
                        rep.max_violation = viol;
                        rep.worst = describe(e, impl);
                    }
                } else {
                    L1EnvelopeProblem p;
                    p.x = e.x;
                    p.C = e.C;
                    p.loss = e.loss;
                    p.theta = theta;
                    p.y = y;
                    p.lower = e.reg.lower;
                    p.upper = e.reg.upper;
                    const L1Solution sol = l1_envelope_value(p);
                    const L1Box box = effective_box(p);
                    if (!l1_stationary(p, box, sol.theta0)) {
                        ++failures;
                        rep.worst = describe(e, impl) + " (returned split not stationary)";
                    }
                }
            } catch (const numeric_error&) {
                ++failures;
                rep.worst = describe(e, impl) + " (no candidate validated)";
            }
            ++rep.cases;
        }
    }
    rep.pass = failures == 0 && rep.max_violation <= rep.tolerance;
    if (failures > 0) {
        std::ostringstream os;
        os << rep.worst << " failures=" << failures;
        rep.worst = os.str();
        rep.max_violation = std::max(rep.max_violation, 1.0);
    }
    return rep;
}

}  // namespace cvxext
