// Acceptance gate. Runs nine end-to-end criteria with pinned tolerances and
// prints one PASS/FAIL line each; exits nonzero if any fails. Sample counts
// and wall-clock budgets are part of the contract, so they are asserted here
// rather than configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cvxext/check.hpp"
#include "cvxext/constraints.hpp"
#include "cvxext/instance.hpp"
#include "cvxext/oracle.hpp"
#include "cvxext/solvers.hpp"
#include "cvxext/surface.hpp"
#include "cvxext/tightest.hpp"

using namespace cvxext;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int criterion, bool pass, const std::string& name,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double uni(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

// ---- criteria 1-5: the randomized property suites at contract scale ----

void criterion_1(std::uint64_t seed) {
    const auto t0 = Clock::now();
    const CheckReport rep = check_extension_property(101, seed);
    const double secs = seconds_since(t0);
    report(1, rep.pass && secs < 5.0, "integer-label agreement across the 8 envelopes",
           "cases=" + std::to_string(rep.cases) + " max=" + fmt(rep.max_violation) +
               " tol=1e-9 " + fmt(secs) + "s<5s");
}

void criterion_2(std::uint64_t seed) {
    const auto t0 = Clock::now();
    const CheckReport m1 = check_oracle_equivalence(200, 1, seed);
    const CheckReport m2 = check_oracle_equivalence(200, 2, seed + 1);
    const double secs = seconds_since(t0);
    report(2, m1.pass && m2.pass && secs < 120.0,
           "closed forms match the splitting oracle",
           "m=1 cases=" + std::to_string(m1.cases) + " max=" + fmt(m1.max_violation) +
               "x tol, m=2 cases=" + std::to_string(m2.cases) + " max=" +
               fmt(m2.max_violation) + "x tol, " + fmt(secs) + "s<120s");
}

void criterion_3(std::uint64_t seed) {
    // 1e4 triples per envelope implementation: the suite splits its budget
    // over 8 implementations x 2 draws.
    const CheckReport conv = check_convexity(80000, seed);
    const CheckReport raw = check_raw_nonconvexity(10000, seed);
    report(3, conv.pass && raw.pass,
           "midpoint convexity, with the raw objective as negative control",
           "cases=" + std::to_string(conv.cases) + " max=" + fmt(conv.max_violation) +
               " tol=1e-8; control violation=" + fmt(raw.max_violation) + ">0.01");
}

void criterion_4(std::uint64_t seed) {
    // 1e3 pairs per envelope implementation.
    const CheckReport rep = check_subgradients(8000, seed);
    report(4, rep.pass, "subgradient inequality and finite-difference agreement",
           "cases=" + std::to_string(rep.cases) + " max=" + fmt(rep.max_violation) +
               "x tol (slack 1e-8, derivatives 1e-5)");
}

void criterion_5(std::uint64_t seed) {
    const CheckReport rep = check_candidate_completeness(500, seed);
    report(5, rep.pass, "closed-form candidate completeness without fallbacks",
           "cases=" + std::to_string(rep.cases) + " max=" + fmt(rep.max_violation) +
               " tol=1e-9");
}

// ---- criterion 6: the exact tightest extension against the envelopes ----

void criterion_6() {
    const auto t0 = Clock::now();
    bool pass = true;
    double worst_single = 0.0, worst_dom = 0.0, worst_int = 0.0;

    {
        Instance inst;
        inst.features = {{1.0}};
        inst.C = 5.0;
        inst.loss = {LossKind::Hinge};
        inst.reg = {RegKind::L2, true, {}, {}};
        inst.decomposition = Decomposition::FullTerm;
        const ExtensionSet ext = build_extensions(inst);
        const LabelSet Y = label_set_from_constraints(inst.labels, 1);
        for (int i = 0; i <= 20; ++i) {
            const double t = -3.0 + 0.3 * i;
            for (int j = 0; j <= 20; ++j) {
                const double y = 0.05 * j;
                const double tv = tightest_extension_value(inst, Y, {t}, {y});
                const double pv = phi_prime(inst, ext, {t}, {y});
                worst_single = std::max(worst_single, std::abs(tv - pv));
            }
        }
        pass = pass && worst_single <= 1e-5;
    }

    {
        Instance inst;
        inst.features = {{1.0}, {-0.6}};
        inst.C = 2.0;
        inst.loss = {LossKind::Hinge};
        inst.reg = {RegKind::L2, true, {}, {}};
        inst.decomposition = Decomposition::FullTerm;
        const ExtensionSet ext = build_extensions(inst);
        const LabelSet Y = label_set_from_constraints(inst.labels, 2);
        for (int i = 0; i < 20; ++i) {
            const double t = -2.5 + 5.0 * i / 19.0;
            for (int j = 0; j < 20; ++j) {
                const double y1 = 0.025 + 0.05 * j;
                for (int k = 0; k < 5; ++k) {
                    const double y2 = 0.1 + 0.2 * k;
                    const double tv = tightest_extension_value(inst, Y, {t}, {y1, y2});
                    const double pv = phi_prime(inst, ext, {t}, {y1, y2});
                    const double slack = (pv - tv) / (1.0 + std::abs(pv));
                    worst_dom = std::max(worst_dom, slack);
                }
            }
            for (int y1 = 0; y1 <= 1; ++y1)
                for (int y2 = 0; y2 <= 1; ++y2) {
                    const double tv = tightest_extension_value(
                        inst, Y, {t}, {double(y1), double(y2)});
                    const double ov = objective_value(inst, {t}, {y1, y2});
                    worst_int = std::max(worst_int, std::abs(tv - ov));
                }
        }
        pass = pass && worst_dom <= 1e-6 && worst_int <= 1e-5;
    }

    const double secs = seconds_since(t0);
    pass = pass && secs < 600.0;
    report(6, pass, "tightest extension: 1-sample equality, 2-sample dominance",
           "single max=" + fmt(worst_single) + " tol=1e-5; dominance slack=" +
               fmt(worst_dom) + "; integer max=" + fmt(worst_int) + " tol=1e-5; " +
               fmt(secs) + "s<600s");
}

// ---- criterion 7: branch and bound against enumeration ----
// Returns the ordering-violation count accumulated over the runs; criterion 9
// asserts it stayed zero.

long long criterion_7(std::uint64_t seed) {
    const auto t0 = Clock::now();
    std::mt19937_64 g(seed);
    bool pass = true;
    double worst = 0.0;
    long long ordering_violations = 0;
    int solved = 0;

    {
        Instance inst;
        inst.features = {{1.0}, {-1.0}};
        inst.C = 1.0;
        inst.loss = {LossKind::Hinge};
        inst.reg = {RegKind::L2, true, {}, {}};
        inst.labels.cardinality = 1;
        inst.decomposition = Decomposition::FullTerm;
        const BnBResult r = branch_and_bound(inst, {});
        ordering_violations += r.ordering_violations;
        ++solved;
        const double dev = std::abs(r.incumbent_value - 0.5);
        worst = std::max(worst, dev);
        pass = pass && dev <= 1e-5;
    }

    const LossKind kinds[3] = {LossKind::Hinge, LossKind::SquaredHinge,
                               LossKind::Logistic};
    for (int k = 0; k < 50; ++k) {
        Instance inst;
        const int S = 2 + k % 5;
        const int m = 1 + (k / 5) % 2;
        inst.loss = {kinds[k % 3], uni(g, 0.5, 2.0), uni(g, 0.5, 2.0)};
        inst.reg = {RegKind::L2, true, {}, {}};
        inst.C = uni(g, 0.5, 4.0);
        inst.decomposition = Decomposition::FullTerm;
        for (int s = 0; s < S; ++s) {
            Vec x(m);
            for (int i = 0; i < m; ++i)
                x[i] = (uni(g, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uni(g, 0.3, 2.0);
            inst.features.push_back(std::move(x));
        }
        // constraints built around a reference labeling so the set is
        // guaranteed nonempty
        std::vector<int> ref(S);
        int total = 0;
        for (int s = 0; s < S; ++s) {
            ref[s] = uni(g, 0.0, 1.0) < 0.5 ? 0 : 1;
            total += ref[s];
        }
        for (int s = 0; s < S / 3; ++s) inst.labels.fixed[s] = ref[s];
        if (k % 2 == 0) inst.labels.cardinality = total;

        const MipResult mip = oracle_mip(inst);
        const BnBResult r = branch_and_bound(inst, {});
        ordering_violations += r.ordering_violations;
        ++solved;

        const double dev = std::abs(r.incumbent_value - mip.value);
        worst = std::max(worst, dev);
        const double recomputed =
            objective_value(inst, r.incumbent_theta, r.incumbent_y);
        const bool consistent = is_member(inst.labels, r.incumbent_y) &&
                                std::abs(recomputed - r.incumbent_value) <=
                                    1e-7 * (1.0 + std::abs(recomputed));
        pass = pass && dev <= 1e-5 && consistent;
    }

    const double secs = seconds_since(t0);
    pass = pass && secs < 600.0;
    report(7, pass, "branch and bound matches exhaustive enumeration",
           "instances=" + std::to_string(solved) + " max deviation=" + fmt(worst) +
               " tol=1e-5; " + fmt(secs) + "s<600s");
    return ordering_violations;
}

// ---- criterion 8: the plotted surfaces ----

struct SurfaceCase {
    const char* name;
    SurfaceSpec spec;
};

void criterion_8(std::uint64_t seed) {
    bool pass = true;
    std::string detail;

    std::vector<SurfaceCase> cases(3);
    cases[0].name = "logistic l2 C=16";
    cases[0].spec.loss = {LossKind::Logistic};
    cases[0].spec.reg = {RegKind::L2, false, {}, {}};
    cases[0].spec.C = 16.0;
    cases[1].name = "hinge half-l2 C=5";
    cases[1].spec.loss = {LossKind::Hinge};
    cases[1].spec.reg = {RegKind::L2, true, {}, {}};
    cases[1].spec.C = 5.0;
    cases[2].name = "squared hinge l1 box C=4";
    cases[2].spec.loss = {LossKind::SquaredHinge};
    cases[2].spec.reg = {RegKind::L1, false, {-3.1}, {3.1}};
    cases[2].spec.C = 4.0;

    for (SurfaceCase& sc : cases) {
        SurfaceSpec& spec = sc.spec;
        spec.x = 1.0;
        const double lim = spec.reg.kind == RegKind::L1 ? 3.1 : 3.0;
        spec.theta = {-lim, lim, 0.1};
        spec.y = {0.0, 1.0, 0.05};
        const std::vector<SurfaceRow> rows = surface_rows(spec);

        // boundary rows reproduce the raw objective at integer labels
        Instance inst;
        inst.features = {Vec{1.0}};
        inst.C = spec.C;
        inst.loss = spec.loss;
        inst.reg = spec.reg;
        inst.decomposition = Decomposition::FullTerm;
        double boundary = 0.0;
        for (const SurfaceRow& r : rows) {
            if (r.y != 0.0 && r.y != 1.0) continue;
            const double d = objective_value(inst, {r.theta}, {int(r.y)});
            boundary = std::max(boundary, std::abs(r.value - d) / (1.0 + std::abs(d)));
        }

        // the surface as a field over (theta, y) passes the convexity probe
        const ExtensionSet ext = build_extensions(inst);
        ScalarField f = [&](const Vec& p) {
            return phi_prime(inst, ext, {p[0]}, {p[1]});
        };
        const double conv =
            oracle_convexity(f, {-lim, 0.0}, {lim, 1.0}, 10000, seed);

        const bool ok = boundary <= 1e-9 && conv <= 1e-8;
        pass = pass && ok;
        detail += std::string(sc.name) + ": boundary=" + fmt(boundary) +
                  " convexity=" + fmt(conv) + "; ";
    }

    // without a box the l1 envelope degenerates: fractional rows collapse and
    // jump at the integer boundary
    SurfaceSpec diag;
    diag.loss = {LossKind::SquaredHinge};
    diag.reg = {RegKind::L1, false, {}, {}};
    diag.C = 4.0;
    diag.x = 1.0;
    diag.theta = {-4.0, 4.0, 8.0};
    diag.y = {0.9, 1.0, 0.05};
    diag.unbounded_diagnostic = true;
    const std::vector<SurfaceRow> rows = surface_rows(diag);
    double jump = 0.0;
    for (const SurfaceRow& a : rows) {
        if (a.y != 1.0) continue;
        for (const SurfaceRow& b : rows)
            if (b.theta == a.theta && std::abs(b.y - 0.95) < 1e-9)
                jump = std::max(jump, std::abs(a.value - b.value));
    }
    pass = pass && jump > 0.1;
    detail += "unbounded-l1 jump=" + fmt(jump) + ">0.1";

    report(8, pass, "surface grids: convex, boundary-exact, l1 limit jump", detail);
}

}  // namespace

int main() {
    const std::uint64_t seed = 20260815;
    criterion_1(seed);
    criterion_2(seed);
    criterion_3(seed);
    criterion_4(seed);
    criterion_5(seed);
    criterion_6();
    const long long ordering_violations = criterion_7(seed);
    criterion_8(seed);
    report(9, ordering_violations == 0,
           "decomposed node bound never drops below the trivial one",
           "violations=" + std::to_string(ordering_violations) +
               " over 51 solver runs");
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
