#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cvxext/errors.hpp"
#include "cvxext/l2_envelope.hpp"
#include "cvxext/oracle.hpp"

using namespace cvxext;

namespace {

double term(const L2EnvelopeProblem& p, const Vec& t, int y) {
    return 0.5 * norm2sq(t) + p.C * loss_value(p.loss, dot(p.x, t), y);
}

void check_solution(const L2EnvelopeProblem& p, const L2Solution& s, double tol) {
    REQUIRE(s.theta0.size() == p.theta.size());
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
        const double mix = (1.0 - p.y) * s.theta0[i] + p.y * s.theta1[i];
        CHECK(mix == doctest::Approx(p.theta[i]).epsilon(1e-9));
    }
    const double direct = (1.0 - p.y) * term(p, s.theta0, 0) + p.y * term(p, s.theta1, 1);
    CHECK(s.value == doctest::Approx(direct).epsilon(tol));
    // the root inclusion certifies optimality of the reported z
    const Interval r = l2_root_residual(p, s.z);
    CHECK(r.distance(0.0) <= 1e-7 * (1.0 + std::fabs(s.z)));
    // the interpolation at z = 0 is always feasible, so never beaten upward
    const double z0 = (1.0 - p.y) * term(p, p.theta, 0) + p.y * term(p, p.theta, 1);
    CHECK(s.value <= z0 + 1e-9 * (1.0 + std::fabs(z0)));
}

}  // namespace

TEST_CASE("hinge envelope at frozen points") {
    L2EnvelopeProblem p{{1.0}, 5.0, {LossKind::Hinge}, {-3.0}, 0.5};
    const L2Solution s = solve_l2_envelope(p);
    CHECK(s.value == doctest::Approx(11.375).epsilon(1e-9));
    check_solution(p, s, 1e-9);

    p.theta = {0.0};
    const L2Solution s0 = solve_l2_envelope(p);
    CHECK(s0.value == doctest::Approx(0.5).epsilon(1e-9));
    check_solution(p, s0, 1e-9);
}

TEST_CASE("squared difference envelope at a frozen point") {
    L2EnvelopeProblem p{{1.0}, 2.0, {LossKind::SquaredDifference}, {0.4}, 0.3};
    const L2Solution s = solve_l2_envelope(p);
    CHECK(s.value == doctest::Approx(0.184).epsilon(1e-9));
    CHECK(s.theta0[0] == doctest::Approx(0.16).epsilon(1e-6));
    CHECK(s.theta1[0] == doctest::Approx(0.96).epsilon(1e-6));
    check_solution(p, s, 1e-9);
}

TEST_CASE("logistic envelope at a frozen point") {
    L2EnvelopeProblem p{{1.0}, 3.0, {LossKind::Logistic}, {-1.0}, 0.5};
    const L2Solution s = solve_l2_envelope(p);
    CHECK(s.value == doctest::Approx(2.2284609775279574).epsilon(1e-9));
    check_solution(p, s, 1e-9);
}

TEST_CASE("two-dimensional hinge envelope at a frozen point") {
    L2EnvelopeProblem p{{1.0, -0.5}, 2.0, {LossKind::Hinge}, {0.3, -0.8}, 0.4};
    const L2Solution s = solve_l2_envelope(p);
    CHECK(s.value == doctest::Approx(1.805).epsilon(1e-9));
    check_solution(p, s, 1e-9);
}

TEST_CASE("candidate list contains a validated root for the hinge family") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ut(-4.0, 4.0), uy(0.05, 0.95),
        uc(0.2, 6.0), ux(0.3, 2.5);
    for (LossKind kind : {LossKind::Hinge, LossKind::SquaredHinge}) {
        for (int t = 0; t < 200; ++t) {
            L2EnvelopeProblem p{{ux(rng)}, uc(rng), {kind, uc(rng), uc(rng)},
                                {ut(rng)}, uy(rng)};
            const L2Solution s = solve_l2_envelope(p);
            bool listed = false;
            for (double z : l2_candidates(p))
                if (std::fabs(z - s.z) <= 1e-7 * (1.0 + std::fabs(z))) listed = true;
            CHECK(listed);
            check_solution(p, s, 1e-9);
        }
    }
}

TEST_CASE("all losses agree with the splitting oracle") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> ut(-3.0, 3.0), uy(0.1, 0.9), uc(0.5, 4.0);
    for (LossKind kind : {LossKind::Hinge, LossKind::SquaredHinge, LossKind::Logistic,
                          LossKind::SquaredDifference}) {
        const double tol = kind == LossKind::Logistic ? 1e-3 : 1e-4;
        for (int t = 0; t < 8; ++t) {
            L2EnvelopeProblem p{{1.0}, uc(rng), {kind}, {ut(rng)}, uy(rng)};
            if (t >= 5) {  // a few two-dimensional cases
                p.x = {1.0, ut(rng)};
                p.theta = {ut(rng), ut(rng)};
            }
            const L2Solution s = solve_l2_envelope(p);
            auto d0 = [&](const Vec& v) { return term(p, v, 0); };
            auto d1 = [&](const Vec& v) { return term(p, v, 1); };
            const double ora = oracle_psi_auto(d0, d1, p.theta, p.y, 1e-3);
            CHECK(s.value == doctest::Approx(ora).epsilon(tol));
        }
    }
}

TEST_CASE("kink-sitting margins do not starve the candidate search") {
    // at theta = 2y - 1 both split margins sit exactly on the hinge kinks
    for (double y : {0.25, 0.5, 0.75}) {
        L2EnvelopeProblem p{{1.0}, 3.0, {LossKind::Hinge}, {2.0 * y - 1.0}, y};
        const L2Solution s = solve_l2_envelope(p);
        check_solution(p, s, 1e-9);
    }
}

TEST_CASE("l2 envelope rejects malformed problems") {
    L2EnvelopeProblem ok{{1.0}, 1.0, {LossKind::Hinge}, {0.0}, 0.5};
    CHECK_NOTHROW((void)solve_l2_envelope(ok));
    L2EnvelopeProblem bad_y = ok;
    bad_y.y = 1.0;
    CHECK_THROWS_AS((void)solve_l2_envelope(bad_y), domain_error);
    L2EnvelopeProblem bad_c = ok;
    bad_c.C = 0.0;
    CHECK_THROWS_AS((void)solve_l2_envelope(bad_c), domain_error);
    L2EnvelopeProblem bad_x = ok;
    bad_x.x = {0.0};
    CHECK_THROWS_AS((void)solve_l2_envelope(bad_x), domain_error);
    L2EnvelopeProblem smooth = ok;
    smooth.loss.kind = LossKind::Logistic;
    CHECK_THROWS_AS((void)l2_candidates(smooth), config_error);
}
