#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "cvxext/errors.hpp"
#include "cvxext/instance.hpp"

using namespace cvxext;

namespace {

Instance base_instance(Decomposition d) {
    Instance inst;
    inst.features = {{1.0, 0.5}, {-0.7, 1.2}, {0.3, -0.4}};
    inst.C = 2.5;
    inst.loss = {LossKind::Hinge, 1.0, 1.0};
    inst.reg = {RegKind::L2, true, {}, {}};
    inst.decomposition = d;
    return inst;
}

// omega + (C/|S|) sum of losses, assembled independently of the decomposition
double direct_phi(const Instance& inst, const Vec& theta, const std::vector<int>& y) {
    double s = regularizer_value(inst.reg, theta);
    double acc = 0.0;
    for (std::size_t i = 0; i < inst.features.size(); ++i)
        acc += loss_value(inst.loss, dot(inst.features[i], theta), y[i]);
    return s + inst.C * acc / static_cast<double>(inst.features.size());
}

}  // namespace

TEST_CASE("instance validation") {
    Instance inst = base_instance(Decomposition::FullTerm);
    CHECK_NOTHROW(validate(inst));
    CHECK(sample_count(inst) == 3);
    CHECK(feature_dim(inst) == 2);

    Instance empty = inst;
    empty.features.clear();
    CHECK_THROWS_AS(validate(empty), config_error);

    Instance ragged = inst;
    ragged.features[1] = {1.0};
    CHECK_THROWS_AS(validate(ragged), config_error);

    Instance badc = inst;
    badc.C = -1.0;
    CHECK_THROWS_AS(validate(badc), config_error);
}

TEST_CASE("decomposition splits terms by decomposition kind") {
    Instance full = base_instance(Decomposition::FullTerm);
    ExtensionSet fs = build_extensions(full);
    CHECK(fs.terms.size() == 3);
    CHECK_FALSE(fs.omega_in_c);
    CHECK_FALSE(fs.softplus_in_c);
    CHECK(fs.terms[0].method == ExtensionMethod::ClosedFormL2);
    CHECK(fs.terms[0].include_reg);

    Instance lo = base_instance(Decomposition::LossOnly);
    ExtensionSet ls = build_extensions(lo);
    CHECK(ls.omega_in_c);
    CHECK(ls.terms[0].method == ExtensionMethod::Trivial);
    CHECK_FALSE(ls.terms[0].include_reg);

    Instance lp = base_instance(Decomposition::LogisticPartial);
    lp.loss.kind = LossKind::Logistic;
    ExtensionSet ps = build_extensions(lp);
    CHECK(ps.softplus_in_c);
    CHECK(ps.terms[0].method == ExtensionMethod::LogisticPartial);
}

TEST_CASE("unsupported combinations are rejected with configuration errors") {
    Instance lp = base_instance(Decomposition::LogisticPartial);
    CHECK_THROWS_AS((void)build_extensions(lp), config_error);  // hinge loss

    lp.loss.kind = LossKind::Logistic;
    lp.loss.c1 = 2.0;
    CHECK_THROWS_AS((void)build_extensions(lp), config_error);  // unequal weights

    lp.loss.c1 = 1.0;
    lp.reg.lower = {-1.0, -1.0};
    lp.reg.upper = {1.0, 1.0};
    CHECK_THROWS_AS((void)build_extensions(lp), config_error);  // bounded theta

    Instance full = base_instance(Decomposition::FullTerm);
    full.reg.lower = {-1.0, -1.0};
    full.reg.upper = {1.0, 1.0};
    CHECK_THROWS_AS((void)build_extensions(full), config_error);  // bounded l2

    Instance l1 = base_instance(Decomposition::FullTerm);
    l1.reg = {RegKind::L1, false, {}, {}};
    CHECK_THROWS_AS((void)build_extensions(l1), config_error);  // unbounded l1

    l1.reg.lower = {-2.0, -2.0};
    l1.reg.upper = {2.0, 2.0};
    CHECK_NOTHROW((void)build_extensions(l1));

    l1.loss.kind = LossKind::SquaredDifference;
    CHECK_THROWS_AS((void)build_extensions(l1), config_error);

    Instance lossonly_l1 = base_instance(Decomposition::LossOnly);
    lossonly_l1.reg = {RegKind::L1, false, {}, {}};
    CHECK_NOTHROW((void)build_extensions(lossonly_l1));  // trivial terms need no box
}

TEST_CASE("every decomposition reproduces the objective") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> ut(-2.0, 2.0);
    std::uniform_int_distribution<int> ub(0, 1);
    for (Decomposition d : {Decomposition::LossOnly, Decomposition::FullTerm,
                            Decomposition::LogisticPartial}) {
        Instance inst = base_instance(d);
        if (d == Decomposition::LogisticPartial) inst.loss.kind = LossKind::Logistic;
        const ExtensionSet ext = build_extensions(inst);
        for (int t = 0; t < 50; ++t) {
            const Vec theta{ut(rng), ut(rng)};
            const std::vector<int> y{ub(rng), ub(rng), ub(rng)};
            const double path = objective_value(inst, ext, theta, y);
            CHECK(path == doctest::Approx(direct_phi(inst, theta, y))
                              .epsilon(1e-12));
            CHECK(objective_value(inst, theta, y) == path);
        }
    }
}

TEST_CASE("one-sample hinge objective at the origin") {
    Instance inst;
    inst.features = {{1.0}};
    inst.C = 5.0;
    inst.loss = {LossKind::Hinge};
    inst.reg = {RegKind::L2, true, {}, {}};
    inst.decomposition = Decomposition::FullTerm;
    CHECK(objective_value(inst, {0.0}, {0}) == doctest::Approx(5.0));
    CHECK(objective_value(inst, {0.0}, {1}) == doctest::Approx(5.0));
    CHECK(objective_value(inst, {-1.0}, {0}) == doctest::Approx(0.5));
}

TEST_CASE("fixed labels are folded into the convex part") {
    Instance inst = base_instance(Decomposition::FullTerm);
    inst.labels.fixed[1] = 1;
    const ExtensionSet ext = build_extensions(inst);
    CHECK(ext.terms.size() == 2);
    REQUIRE(ext.fixed_terms.size() == 1);
    CHECK(ext.fixed_terms[0].sample == 1);
    CHECK(ext.fixed_terms[0].label == 1);

    // the fractional extension ignores the y entry at the fixed sample
    const Vec theta{0.4, -0.2};
    const double a = phi_prime(inst, ext, theta, {0.3, 0.0, 0.7});
    const double b = phi_prime(inst, ext, theta, {0.3, 1.0, 0.7});
    CHECK(a == b);

    // at the pinned labeling the extension reproduces the objective
    const double c = phi_prime(inst, ext, theta, {0.0, 1.0, 1.0});
    CHECK(c == doctest::Approx(objective_value(inst, ext, theta, {0, 1, 1}))
                   .epsilon(1e-12));
}

TEST_CASE("extension at integer labels equals the objective") {
    Instance inst = base_instance(Decomposition::FullTerm);
    const ExtensionSet ext = build_extensions(inst);
    const Vec theta{0.7, -1.1};
    for (int mask = 0; mask < 8; ++mask) {
        const std::vector<int> y{mask & 1, (mask >> 1) & 1, (mask >> 2) & 1};
        const Vec yf{static_cast<double>(y[0]), static_cast<double>(y[1]),
                     static_cast<double>(y[2])};
        CHECK(phi_prime(inst, ext, theta, yf) ==
              doctest::Approx(objective_value(inst, ext, theta, y)).epsilon(1e-12));
    }
}

TEST_CASE("extension never exceeds the interpolated objective") {
    Instance inst = base_instance(Decomposition::FullTerm);
    const ExtensionSet ext = build_extensions(inst);
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> ut(-2.0, 2.0), uy(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
        const Vec theta{ut(rng), ut(rng)};
        const Vec y{uy(rng), uy(rng), uy(rng)};
        // convex combination bound from the corner values
        double bound = 0.0;
        for (int mask = 0; mask < 8; ++mask) {
            double w = 1.0;
            std::vector<int> yi(3);
            for (int s = 0; s < 3; ++s) {
                yi[s] = (mask >> s) & 1;
                w *= yi[s] == 1 ? y[s] : 1.0 - y[s];
            }
            bound += w * objective_value(inst, ext, theta, yi);
        }
        CHECK(phi_prime(inst, ext, theta, y) <= bound + 1e-9);
    }
}

TEST_CASE("label subgradients flag integer entries and skip fixed samples") {
    Instance inst = base_instance(Decomposition::FullTerm);
    inst.labels.fixed[0] = 0;
    const ExtensionSet ext = build_extensions(inst);
    const Vec theta{0.2, 0.1};
    const PhiPrimeGrad g = phi_prime_subgradient(inst, ext, theta, {0.0, 1.0, 0.4});
    CHECK(g.y_grad[0] == 0.0);
    CHECK(g.y_grad[1] == -std::numeric_limits<double>::infinity());
    CHECK(std::isfinite(g.y_grad[2]));
    CHECK(g.theta_grad.size() == 2);
}

TEST_CASE("smooth instance subgradients match finite differences") {
    Instance inst = base_instance(Decomposition::FullTerm);
    inst.loss.kind = LossKind::Logistic;
    const ExtensionSet ext = build_extensions(inst);
    const Vec theta{0.3, -0.6};
    const Vec y{0.35, 0.75, 0.5};
    const PhiPrimeGrad g = phi_prime_subgradient(inst, ext, theta, y);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
        Vec tp = theta, tm = theta;
        tp[i] += h;
        tm[i] -= h;
        const double fd = (phi_prime(inst, ext, tp, y) - phi_prime(inst, ext, tm, y)) /
                          (2.0 * h);
        CHECK(g.theta_grad[i] == doctest::Approx(fd).epsilon(1e-4));
    }
    for (int s = 0; s < 3; ++s) {
        Vec yp = y, ym = y;
        yp[s] += h;
        ym[s] -= h;
        const double fd = (phi_prime(inst, ext, theta, yp) -
                           phi_prime(inst, ext, theta, ym)) / (2.0 * h);
        CHECK(g.y_grad[s] == doctest::Approx(fd).epsilon(1e-4));
    }
}
