#include "cvxext/instance.hpp"

#include <cmath>

#include "cvxext/errors.hpp"

namespace cvxext {

namespace {

TermExtension make_term(const Instance& inst, int sample) {
    TermExtension t;
    t.x = inst.features[static_cast<std::size_t>(sample)];
    t.C = inst.C;
    t.loss = inst.loss;
    t.reg = inst.reg;
    switch (inst.decomposition) {
        case Decomposition::LossOnly:
            t.method = ExtensionMethod::Trivial;
            t.include_reg = false;
            break;
        case Decomposition::FullTerm:
            t.include_reg = true;
            if (inst.reg.kind == RegKind::L2) {
                t.method = (inst.loss.kind == LossKind::Hinge ||
                            inst.loss.kind == LossKind::SquaredHinge)
                               ? ExtensionMethod::ClosedFormL2
                               : ExtensionMethod::BisectionL2;
            } else {
                t.method = ExtensionMethod::ClosedFormL1;
            }
            break;
        case Decomposition::LogisticPartial:
            t.method = ExtensionMethod::LogisticPartial;
            t.include_reg = true;
            break;
    }
    return t;
}

void check_combination(const Instance& inst) {
    const int m = feature_dim(inst);
    if (inst.decomposition == Decomposition::LossOnly) return;
    if (inst.decomposition == Decomposition::LogisticPartial) {
        if (inst.loss.kind != LossKind::Logistic)
            throw config_error("logistic partial decomposition requires the logistic loss");
        if (inst.loss.c0 != inst.loss.c1)
            throw config_error(
                "logistic partial decomposition requires equal class weights");
        if (inst.reg.kind != RegKind::L2)
            throw config_error("logistic partial decomposition requires l2 regularization");
        if (!inst.reg.lower.empty() || !inst.reg.upper.empty())
            throw config_error("logistic partial decomposition requires unbounded theta");
        return;
    }
    // FullTerm
    if (inst.reg.kind == RegKind::L2) {
        if (!inst.reg.lower.empty() || !inst.reg.upper.empty())
            throw config_error("l2 envelopes are derived for unbounded theta");
        return;
    }
    // L1 over a box
    if (inst.reg.half)
        throw config_error("the half convention applies to l2 regularization only");
    if (inst.loss.kind == LossKind::SquaredDifference)
        throw config_error("squared difference loss has no l1 envelope form");
    const Vec lo = box_lower(inst.reg, static_cast<std::size_t>(m));
    const Vec hi = box_upper(inst.reg, static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        if (std::isinf(lo[static_cast<std::size_t>(i)]) &&
            std::isinf(hi[static_cast<std::size_t>(i)]))
            throw config_error(
                "l1 terms need a bounded box: the extension jumps at integer labels "
                "when theta is unbounded");
    }
}

}  // namespace

const char* to_string(Decomposition d) {
    switch (d) {
        case Decomposition::LossOnly: return "loss_only";
        case Decomposition::FullTerm: return "full_term";
        case Decomposition::LogisticPartial: return "logistic_partial";
    }
    return "?";
}

int sample_count(const Instance& inst) {
    return static_cast<int>(inst.features.size());
}

int feature_dim(const Instance& inst) {
    return inst.features.empty() ? 0 : static_cast<int>(inst.features.front().size());
}

void validate(const Instance& inst) {
    if (inst.features.empty()) throw config_error("instance: no samples");
    const std::size_t m = inst.features.front().size();
    if (m == 0) throw config_error("instance: zero-dimensional features");
    for (const Vec& x : inst.features)
        if (x.size() != m) throw config_error("instance: inconsistent feature dimensions");
    if (!(inst.C >= 0.0) || !std::isfinite(inst.C))
        throw config_error("instance: C must be a finite nonnegative real");
    validate(inst.loss);
    validate(inst.reg, m);
    validate(inst.labels, sample_count(inst));
}

ExtensionSet build_extensions(const Instance& inst) {
    validate(inst);
    check_combination(inst);
    ExtensionSet set;
    set.omega_in_c = inst.decomposition == Decomposition::LossOnly;
    set.softplus_in_c = inst.decomposition == Decomposition::LogisticPartial;
    const int n = sample_count(inst);
    for (int s = 0; s < n; ++s) {
        auto it = inst.labels.fixed.find(s);
        if (it != inst.labels.fixed.end()) {
            set.fixed_terms.push_back({make_term(inst, s), s, it->second});
        } else {
            set.terms.push_back(make_term(inst, s));
            set.term_sample.push_back(s);
        }
    }
    return set;
}

double convex_part_value(const Instance& inst, const ExtensionSet& ext,
                         const Vec& theta) {
    double c = 0.0;
    if (ext.omega_in_c) c += regularizer_value(inst.reg, theta);
    const double n = static_cast<double>(sample_count(inst));
    if (ext.softplus_in_c) {
        // the y-independent part of the logistic loss, over all samples
        double sum = 0.0;
        for (const Vec& x : inst.features)
            sum += loss_value(inst.loss, dot(x, theta), 0.0);
        c += inst.C * sum / n;
    }
    for (const FixedTerm& ft : ext.fixed_terms)
        c += term_d_value(ft.ext, theta, static_cast<double>(ft.label)) / n;
    return c;
}

Vec convex_part_subgradient(const Instance& inst, const ExtensionSet& ext,
                            const Vec& theta) {
    const std::size_t m = theta.size();
    Vec g(m, 0.0);
    if (ext.omega_in_c) {
        const std::vector<Interval> dr = regularizer_subdifferential(inst.reg, theta);
        for (std::size_t i = 0; i < m; ++i) g[i] += dr[i].mid();
    }
    const double n = static_cast<double>(sample_count(inst));
    if (ext.softplus_in_c) {
        for (const Vec& x : inst.features) {
            const double s = loss_subdifferential(inst.loss, dot(x, theta), 0.0).mid();
            for (std::size_t i = 0; i < m; ++i) g[i] += inst.C * s * x[i] / n;
        }
    }
    for (const FixedTerm& ft : ext.fixed_terms) {
        const Vec v =
            term_integer_subgradient(ft.ext, theta, static_cast<double>(ft.label));
        for (std::size_t i = 0; i < m; ++i) g[i] += v[i] / n;
    }
    return g;
}

double objective_value(const Instance& inst, const ExtensionSet& ext, const Vec& theta,
                       const std::vector<int>& y) {
    if (static_cast<int>(y.size()) != sample_count(inst))
        throw domain_error("objective: labeling length != |S|");
    double c = 0.0;
    if (ext.omega_in_c) c += regularizer_value(inst.reg, theta);
    const double n = static_cast<double>(sample_count(inst));
    if (ext.softplus_in_c) {
        double sum = 0.0;
        for (const Vec& x : inst.features)
            sum += loss_value(inst.loss, dot(x, theta), 0.0);
        c += inst.C * sum / n;
    }
    // every term at its requested integer label, fixed or not
    for (const FixedTerm& ft : ext.fixed_terms)
        c += term_d_value(ft.ext, theta,
                          static_cast<double>(y[static_cast<std::size_t>(ft.sample)])) / n;
    for (std::size_t t = 0; t < ext.terms.size(); ++t)
        c += term_d_value(ext.terms[t], theta,
                          static_cast<double>(
                              y[static_cast<std::size_t>(ext.term_sample[t])])) / n;
    return c;
}

double objective_value(const Instance& inst, const Vec& theta,
                       const std::vector<int>& y) {
    return objective_value(inst, build_extensions(inst), theta, y);
}

double phi_prime(const Instance& inst, const ExtensionSet& ext, const Vec& theta,
                 const Vec& y) {
    if (static_cast<int>(y.size()) != sample_count(inst))
        throw domain_error("phi_prime: label vector length != |S|");
    double v = convex_part_value(inst, ext, theta);
    const double n = static_cast<double>(sample_count(inst));
    for (std::size_t t = 0; t < ext.terms.size(); ++t)
        v += envelope_value(ext.terms[t], theta,
                            y[static_cast<std::size_t>(ext.term_sample[t])]) / n;
    return v;
}

PhiPrimeGrad phi_prime_subgradient(const Instance& inst, const ExtensionSet& ext,
                                   const Vec& theta, const Vec& y) {
    if (static_cast<int>(y.size()) != sample_count(inst))
        throw domain_error("phi_prime: label vector length != |S|");
    PhiPrimeGrad g;
    g.theta_grad = convex_part_subgradient(inst, ext, theta);
    g.y_grad.assign(y.size(), 0.0);
    const double n = static_cast<double>(sample_count(inst));
    for (std::size_t t = 0; t < ext.terms.size(); ++t) {
        const std::size_t s = static_cast<std::size_t>(ext.term_sample[t]);
        const SubgradientPair sg = envelope_subgradient(ext.terms[t], theta, y[s]);
        for (std::size_t i = 0; i < theta.size(); ++i)
            g.theta_grad[i] += sg.v[i] / n;
        g.y_grad[s] = std::isfinite(sg.w) ? sg.w / n : sg.w;
    }
    return g;
}

}  // namespace cvxext
