#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cvxext/errors.hpp"
#include "cvxext/oracle.hpp"
#include "cvxext/solvers.hpp"

using namespace cvxext;

namespace {

Instance two_sample(bool cardinality) {
    Instance inst;
    inst.features = {{1.0}, {-1.0}};
    inst.C = 1.0;
    inst.loss = {LossKind::Hinge};
    inst.reg = {RegKind::L2, true, {}, {}};
    if (cardinality)
        inst.labels.cardinality = 1;
    else
        inst.labels.linear.push_back({{1.0, 1.0}, 1.0});
    inst.decomposition = Decomposition::FullTerm;
    return inst;
}

}  // namespace

TEST_CASE("projection onto a cardinality slice") {
    LabelConstraintSet cons;
    cons.cardinality = 1;
    const Vec p = project_labels({0.7, 0.9}, cons, 2);
    CHECK(p[0] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(0.6).epsilon(1e-9));
    // feasible points are fixed points
    const Vec q = project_labels(p, cons, 2);
    CHECK(q[0] == doctest::Approx(p[0]).epsilon(1e-9));
    CHECK(q[1] == doctest::Approx(p[1]).epsilon(1e-9));
}

TEST_CASE("projection clamps the box and honors pins") {
    LabelConstraintSet box;
    const Vec c = project_labels({1.7, -0.3}, box, 2);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 0.0);

    LabelConstraintSet pin;
    pin.fixed[0] = 1;
    const Vec f = project_labels({0.2, 0.4}, pin, 2);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == doctest::Approx(0.4));
}

TEST_CASE("projection onto a halfspace row") {
    LabelConstraintSet cons;
    cons.linear.push_back({{1.0, 1.0}, 1.0});
    const Vec p = project_labels({1.0, 1.0}, cons, 2);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fractional_feasible(cons, p, 1e-6));
}

TEST_CASE("cardinality projection saturates when the mass is extreme") {
    LabelConstraintSet cons;
    cons.cardinality = 2;
    const Vec p = project_labels({-3.0, -2.0, -1.0}, cons, 3);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(2.0).epsilon(1e-8));
    for (double v : p) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("decomposed relaxation solves the two-sample instance") {
    const Instance inst = two_sample(false);
    RelaxOptions opt;
    opt.extension = ExtensionChoice::Decomposed;
    const RelaxationResult r = solve_relaxation(inst, opt);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.gap_estimate <= 1e-6);
    CHECK(fractional_feasible(inst.labels, r.y, 1e-6));

    RelaxOptions triv;
    triv.extension = ExtensionChoice::TrivialExt;
    const RelaxationResult t = solve_relaxation(inst, triv);
    CHECK(t.value == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.value >= t.value - 1e-9);  // decomposed dominates trivial
}

TEST_CASE("theorem1 relaxation is tight on a two-corner hull") {
    const Instance inst = two_sample(true);
    RelaxOptions opt;
    opt.extension = ExtensionChoice::Theorem1;
    const RelaxationResult r = solve_relaxation(inst, opt);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(fractional_feasible(inst.labels, r.y, 1e-6));
}

TEST_CASE("theorem1 relaxation rejects general linear rows") {
    const Instance inst = two_sample(false);
    RelaxOptions opt;
    opt.extension = ExtensionChoice::Theorem1;
    CHECK_THROWS_AS((void)solve_relaxation(inst, opt), config_error);
}

TEST_CASE("fully pinned constraint sets collapse to one supervised solve") {
    Instance inst = two_sample(false);
    inst.labels.linear.clear();
    inst.labels.fixed[0] = 0;
    inst.labels.fixed[1] = 1;
    RelaxOptions opt;
    const RelaxationResult r = solve_relaxation(inst, opt);
    CHECK(r.iterations == 1);
    CHECK(r.y[0] == doctest::Approx(0.0));
    CHECK(r.y[1] == doctest::Approx(1.0));
    const MipResult mip = oracle_mip(inst);
    CHECK(r.value == doctest::Approx(mip.value).epsilon(1e-6));
}

TEST_CASE("branch and bound solves the two-sample instance") {
    for (bool card : {false, true}) {
        const Instance inst = two_sample(card);
        BnBOptions opt;
        const BnBResult r = branch_and_bound(inst, opt);
        CHECK(r.incumbent_value == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(r.proven_gap <= opt.tol + 1e-12);
        CHECK(r.ordering_violations == 0);
        CHECK(r.nodes_explored >= 1);
        CHECK(is_member(inst.labels, r.incumbent_y));
        CHECK(objective_value(inst, r.incumbent_theta, r.incumbent_y) ==
              doctest::Approx(r.incumbent_value).epsilon(1e-9));
    }
}

TEST_CASE("branch and bound with the trivial extension stays exact") {
    const Instance inst = two_sample(false);
    BnBOptions opt;
    opt.extension = ExtensionChoice::TrivialExt;
    const BnBResult r = branch_and_bound(inst, opt);
    CHECK(r.incumbent_value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("branch and bound rejects the theorem1 extension") {
    const Instance inst = two_sample(false);
    BnBOptions opt;
    opt.extension = ExtensionChoice::Theorem1;
    CHECK_THROWS_AS((void)branch_and_bound(inst, opt), config_error);
}

TEST_CASE("all labels fixed explores a single node") {
    Instance inst = two_sample(false);
    inst.labels.linear.clear();
    inst.labels.fixed[0] = 1;
    inst.labels.fixed[1] = 0;
    BnBOptions opt;
    const BnBResult r = branch_and_bound(inst, opt);
    CHECK(r.nodes_explored == 1);
    CHECK(r.incumbent_y == std::vector<int>{1, 0});
    CHECK(r.incumbent_value ==
          doctest::Approx(oracle_mip(inst).value).epsilon(1e-6));
}

TEST_CASE("infeasible instances raise the dedicated error") {
    Instance inst = two_sample(false);
    inst.labels.fixed[0] = 1;
    inst.labels.fixed[1] = 1;
    BnBOptions opt;
    CHECK_THROWS_AS((void)branch_and_bound(inst, opt), infeasible_error);
    RelaxOptions ropt;
    CHECK_THROWS_AS((void)solve_relaxation(inst, ropt), infeasible_error);
}

TEST_CASE("branch and bound matches exhaustive enumeration on random instances") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> ux(-1.5, 1.5), uc(0.5, 3.0);
    std::uniform_int_distribution<int> un(2, 4), um(1, 2), upick(0, 2);
    const LossKind kinds[] = {LossKind::Hinge, LossKind::SquaredHinge,
                              LossKind::Logistic};
    int total_ordering_violations = 0;
    for (int t = 0; t < 8; ++t) {
        Instance inst;
        const int n = un(rng), m = um(rng);
        for (int s = 0; s < n; ++s) {
            Vec x(m);
            for (double& v : x) v = ux(rng);
            if (norm2(x) < 0.1) x[0] = 1.0;
            inst.features.push_back(x);
        }
        inst.C = uc(rng);
        inst.loss = {kinds[upick(rng)]};
        inst.reg = {RegKind::L2, true, {}, {}};
        inst.decomposition = Decomposition::FullTerm;
        if (t % 3 == 0) inst.labels.cardinality = 1 + (t % n);
        if (t % 3 == 1) inst.labels.fixed[0] = t & 1;
        BnBOptions opt;
        const BnBResult r = branch_and_bound(inst, opt);
        const MipResult mip = oracle_mip(inst);
        CHECK(r.incumbent_value == doctest::Approx(mip.value).epsilon(1e-5));
        total_ordering_violations += r.ordering_violations;
    }
    CHECK(total_ordering_violations == 0);
}
