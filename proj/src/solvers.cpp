#include "cvxext/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>

#include "cvxext/errors.hpp"
#include "cvxext/minimize.hpp"
#include "cvxext/tightest.hpp"

namespace cvxext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWClamp = 1e6;   // stand-in slope for the infinite boundary flag
constexpr double kDelta = 1e-9;   // interior offset for boundary subgradient calls

std::vector<int> free_indices(const LabelConstraintSet& cons, int samples) {
    std::vector<int> out;
    for (int s = 0; s < samples; ++s)
        if (!cons.fixed.count(s)) out.push_back(s);
    return out;
}

// Projection onto {sum v = k, 0 <= v <= 1} by bisection on the uniform shift.
Vec capped_simplex(const Vec& v, double k) {
    const int n = static_cast<int>(v.size());
    double tlo = *std::min_element(v.begin(), v.end()) - 1.5;
    double thi = *std::max_element(v.begin(), v.end()) + 0.5;
    auto mass = [&](double tau) {
        double s = 0.0;
        for (double vi : v) s += clamp(vi - tau, 0.0, 1.0);
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (tlo + thi);
        if (mass(mid) > k) tlo = mid; else thi = mid;
    }
    const double tau = 0.5 * (tlo + thi);
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = clamp(v[i] - tau, 0.0, 1.0);
    // spread the bisection leftover over strictly interior coordinates
    double excess = k;
    int interior = 0;
    for (double o : out) {
        excess -= o;
        if (o > 1e-12 && o < 1.0 - 1e-12) ++interior;
    }
    if (interior > 0 && std::abs(excess) < 1e-6)
        for (double& o : out)
            if (o > 1e-12 && o < 1.0 - 1e-12) o = clamp(o + excess / interior, 0.0, 1.0);
    return out;
}

// Exact projection onto pins x [0,1] x optional cardinality slice.
Vec base_project(const Vec& y, const LabelConstraintSet& cons, int samples) {
    Vec out(samples);
    const std::vector<int> free = free_indices(cons, samples);
    double pinned_mass = 0.0;
    for (int s = 0; s < samples; ++s) {
        auto it = cons.fixed.find(s);
        if (it != cons.fixed.end()) {
            out[s] = static_cast<double>(it->second);
            pinned_mass += out[s];
        } else {
            out[s] = clamp(y[s], 0.0, 1.0);
        }
    }
    if (!cons.cardinality) return out;
    const double k_free = static_cast<double>(*cons.cardinality) - pinned_mass;
    if (free.empty()) {
        if (std::abs(k_free) > 1e-9)
            throw infeasible_error("label projection: pinned labels contradict the cardinality");
        return out;
    }
    if (k_free < -1e-9 || k_free > static_cast<double>(free.size()) + 1e-9)
        throw infeasible_error("label projection: cardinality unreachable from the pinned labels");
    Vec sub(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) sub[i] = y[free[i]];
    const Vec proj = capped_simplex(sub, clamp(k_free, 0.0, static_cast<double>(free.size())));
    for (std::size_t i = 0; i < free.size(); ++i) out[free[i]] = proj[i];
    return out;
}

}  // namespace

std::string to_string(ExtensionChoice choice) {
    switch (choice) {
        case ExtensionChoice::TrivialExt: return "trivial";
        case ExtensionChoice::Decomposed: return "decomposed";
        case ExtensionChoice::Theorem1: return "theorem1";
    }
    return "?";
}

Vec project_labels(const Vec& y, const LabelConstraintSet& cons, int samples) {
    if (static_cast<int>(y.size()) != samples)
        throw domain_error("label projection: vector length != sample count");
    validate(cons, samples);
    if (cons.linear.empty()) return base_project(y, cons, samples);

    // Dykstra cycles between the pin/box/cardinality set and each halfspace.
    const int sets = 1 + static_cast<int>(cons.linear.size());
    std::vector<Vec> corr(sets, Vec(samples, 0.0));
    Vec cur = y;
    for (int cycle = 0; cycle < 10000; ++cycle) {
        double moved = 0.0;
        for (int j = 0; j < sets; ++j) {
            Vec z = axpy(cur, 1.0, corr[j]);
            Vec nxt;
            if (j == 0) {
                nxt = base_project(z, cons, samples);
            } else {
                const LinearConstraint& lin = cons.linear[j - 1];
                nxt = z;
                double viol = -lin.rhs;
                double a2 = 0.0;
                for (int s = 0; s < samples; ++s) {
                    viol += lin.coeffs[s] * z[s];
                    a2 += lin.coeffs[s] * lin.coeffs[s];
                }
                if (viol > 0.0 && a2 > 0.0)
                    for (int s = 0; s < samples; ++s) nxt[s] -= viol / a2 * lin.coeffs[s];
            }
            for (int s = 0; s < samples; ++s) {
                corr[j][s] = z[s] - nxt[s];
                moved = std::max(moved, std::abs(nxt[s] - cur[s]));
            }
            cur = std::move(nxt);
        }
        if (moved < 1e-12) break;
    }
    if (!fractional_feasible(cons, cur, 1e-7))
        throw infeasible_error("label projection: cyclic projection did not reach the "
                               "constraint set; it may be empty");
    return cur;
}

namespace {

Instance with_decomposition(const Instance& inst, ExtensionChoice choice) {
    Instance out = inst;
    if (choice == ExtensionChoice::TrivialExt) {
        out.decomposition = Decomposition::LossOnly;
    } else if (choice == ExtensionChoice::Decomposed &&
               out.decomposition == Decomposition::LossOnly) {
        out.decomposition = Decomposition::FullTerm;
    }
    return out;
}

// Radius bound on any minimizer, from the regularizer floor under phi'.
double coercive_radius(const Instance& inst, double f0) {
    const int m = feature_dim(inst);
    const double f = std::max(f0, 0.0);
    if (inst.reg.kind == RegKind::L1) {
        double r = f;  // ||theta*||_2 <= ||theta*||_1 <= phi'(theta*) <= f0
        const Vec lo = box_lower(inst.reg, m), hi = box_upper(inst.reg, m);
        bool finite = true;
        for (int i = 0; i < m; ++i)
            if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) finite = false;
        if (finite) r = std::min(r, norm2(axpy(hi, -1.0, lo)));
        return r;
    }
    const double s = inst.reg.half ? 0.5 : 1.0;
    double A = 0.0;
    if (inst.decomposition == Decomposition::LogisticPartial)
        for (const auto& x : inst.features)
            A = std::max(A, norm2(x) * inst.C * inst.loss.c0 / (2.0 * s));
    return A + std::sqrt(std::max(0.0, A * A + (f + s * A * A) / s));
}

struct SupSolve {
    Vec theta;
    double value = 0.0;
    double cert = 0.0;  // certified distance of value to the supervised minimum
};

// Exact-ish supervised solve at a fixed labeling: nested golden section up to
// three dimensions, certified projected subgradient beyond.
SupSolve supervised_solve(const Instance& inst, const ExtensionSet& ext,
                          const std::vector<int>& bits, double tol) {
    const int m = feature_dim(inst);
    const Vec lo = box_lower(inst.reg, m), hi = box_upper(inst.reg, m);
    SupSolve out;
    if (m <= 3) {
        auto f = [&](const Vec& t) { return objective_value(inst, ext, t, bits); };
        const BoxMin got = minimize_box_auto(f, lo, hi, tol, 4.0);
        out.theta = got.x;
        out.value = got.value;
        out.cert = 1e-8 * (1.0 + std::abs(got.value));
        return out;
    }
    Vec yb(bits.begin(), bits.end());
    Vec theta(m, 0.0);
    for (int i = 0; i < m; ++i) theta[i] = clamp(0.0, lo[i], hi[i]);
    double f0 = phi_prime(inst, ext, theta, yb);
    const double R = norm2(theta) + coercive_radius(inst, f0);
    double best = f0;
    Vec best_theta = theta;
    double sum_a = 0.0, sum_a2g2 = 0.0;
    const int budget = 3000;
    for (int t = 1; t <= budget; ++t) {
        const PhiPrimeGrad g = phi_prime_subgradient(inst, ext, theta, yb);
        const double gn = norm2(g.theta_grad);
        if (gn < 1e-14) break;
        const double alpha = R / (std::sqrt(static_cast<double>(t)) * gn);
        sum_a += alpha;
        sum_a2g2 += alpha * alpha * gn * gn;
        for (int i = 0; i < m; ++i)
            theta[i] = clamp(theta[i] - alpha * g.theta_grad[i], lo[i], hi[i]);
        const double v = phi_prime(inst, ext, theta, yb);
        if (v < best) {
            best = v;
            best_theta = theta;
        }
    }
    out.theta = best_theta;
    out.value = objective_value(inst, ext, best_theta, bits);
    out.cert = sum_a > 0.0 ? (R * R + sum_a2g2) / (2.0 * sum_a) : 0.0;
    out.cert += 1e-9 * (1.0 + std::abs(out.value));
    return out;
}

// Projected subgradient on (theta, y) jointly. Values are tracked at the
// exact iterates; subgradients are taken a hair inside the label box so the
// integer-boundary flags never enter a step, and the certified gap carries a
// correction for that offset.
RelaxationResult relax_core(const Instance& inst, const ExtensionSet& ext,
                            int budget, std::optional<double> upper) {
    const int n = sample_count(inst);
    const int m = feature_dim(inst);
    const LabelConstraintSet& cons = inst.labels;
    const Vec lo = box_lower(inst.reg, m), hi = box_upper(inst.reg, m);
    const std::vector<int> free = free_indices(cons, n);

    Vec theta(m, 0.0);
    for (int i = 0; i < m; ++i) theta[i] = clamp(0.0, lo[i], hi[i]);
    Vec y = project_labels(Vec(n, 0.5), cons, n);

    double cur = phi_prime(inst, ext, theta, y);
    double best = cur;
    Vec best_theta = theta, best_y = y;

    const double Rtheta = norm2(theta) + coercive_radius(inst, cur);
    const double R2 = Rtheta * Rtheta + static_cast<double>(free.size());
    const double Rstep = std::sqrt(R2);

    double sum_a = 0.0, sum_a2g2 = 0.0, gmax = 0.0;
    bool surrogate = false;
    int used = 0;
    for (int t = 1; t <= budget; ++t) {
        used = t;
        Vec ye = y;
        for (int s : free) {
            const double c = clamp(ye[s], kDelta, 1.0 - kDelta);
            if (c != ye[s]) surrogate = true;
            ye[s] = c;
        }
        PhiPrimeGrad g = phi_prime_subgradient(inst, ext, theta, ye);
        double g2 = norm2sq(g.theta_grad);
        for (int s : free) {
            g.y_grad[s] = clamp(g.y_grad[s], -kWClamp, kWClamp);
            g2 += g.y_grad[s] * g.y_grad[s];
        }
        const double gn = std::sqrt(g2);
        if (gn < 1e-14) break;
        gmax = std::max(gmax, gn);

        double alpha = Rstep / (std::sqrt(static_cast<double>(t)) * gn);
        if (upper && cur > *upper) alpha = std::max(alpha, (cur - *upper) / g2);
        sum_a += alpha;
        sum_a2g2 += alpha * alpha * g2;

        for (int i = 0; i < m; ++i)
            theta[i] = clamp(theta[i] - alpha * g.theta_grad[i], lo[i], hi[i]);
        for (int s : free) y[s] -= alpha * g.y_grad[s];
        y = project_labels(y, cons, n);

        cur = phi_prime(inst, ext, theta, y);
        if (cur < best) {
            best = cur;
            best_theta = theta;
            best_y = y;
        }
    }

    RelaxationResult res;
    res.theta = best_theta;
    res.y = best_y;
    res.value = phi_prime(inst, ext, best_theta, best_y);
    res.iterations = used;
    double gap = sum_a > 0.0 ? (R2 + sum_a2g2) / (2.0 * sum_a) : 0.0;
    if (surrogate) gap += kDelta * std::sqrt(static_cast<double>(free.size())) * (kWClamp + gmax);
    res.gap_estimate = gap + 1e-9 * (1.0 + std::abs(res.value));
    return res;
}

// Nearest feasible integer labeling to a fractional y, by enumeration.
std::optional<std::vector<int>> nearest_member(const std::vector<std::vector<int>>& members,
                                               const Vec& y) {
    if (members.empty()) return std::nullopt;
    double best = kInf;
    const std::vector<int>* pick = nullptr;
    for (const auto& mem : members) {
        double d = 0.0;
        for (std::size_t s = 0; s < mem.size(); ++s) {
            const double diff = y[s] - static_cast<double>(mem[s]);
            d += diff * diff;
        }
        if (d < best) {
            best = d;
            pick = &mem;
        }
    }
    return *pick;
}

RelaxationResult solve_theorem1_relaxation(const Instance& inst) {
    const int n = sample_count(inst);
    const int m = feature_dim(inst);
    const LabelConstraintSet& cons = inst.labels;
    if (!cons.linear.empty())
        throw config_error("theorem1 relaxation: general linear label constraints "
                           "are not supported");
    LabelSet Y = label_set_from_constraints(cons, n);
    if (Y.members.empty()) throw infeasible_error("theorem1 relaxation: no feasible labeling");

    const std::vector<int> free = free_indices(cons, n);
    // Under a cardinality constraint the last free label is eliminated so the
    // search region stays a box.
    int varied = static_cast<int>(free.size());
    double k_free = 0.0;
    if (cons.cardinality) {
        double pinned = 0.0;
        for (const auto& kv : cons.fixed) pinned += kv.second;
        k_free = static_cast<double>(*cons.cardinality) - pinned;
        varied -= 1;
        if (varied > 1)
            throw config_error("theorem1 relaxation: at most two free labels under a "
                               "cardinality constraint");
    }
    const int dims = m + varied;
    if (dims > 3)
        throw config_error("theorem1 relaxation: joint dimension above 3 is not supported");

    Vec lo = box_lower(inst.reg, m), hi = box_upper(inst.reg, m);
    for (int j = 0; j < varied; ++j) {
        double vlo = 0.0, vhi = 1.0;
        if (cons.cardinality) {
            vlo = std::max(0.0, k_free - 1.0);
            vhi = std::min(1.0, k_free);
            if (vlo > vhi + 1e-12)
                throw infeasible_error("theorem1 relaxation: cardinality unreachable");
        }
        lo.push_back(vlo);
        hi.push_back(vhi);
    }

    auto assemble_y = [&](const Vec& z) {
        Vec y(n, 0.0);
        for (const auto& kv : cons.fixed) y[kv.first] = static_cast<double>(kv.second);
        double mass = 0.0;
        for (int j = 0; j < varied; ++j) {
            y[free[j]] = z[m + j];
            mass += z[m + j];
        }
        if (cons.cardinality && !free.empty())
            y[free.back()] = clamp(k_free - mass, 0.0, 1.0);
        return y;
    };
    auto f = [&](const Vec& z) {
        Vec theta(z.begin(), z.begin() + m);
        return tightest_extension_value(inst, Y, theta, assemble_y(z));
    };

    const double tol = dims >= 3 ? 1e-4 : 1e-7;
    const BoxMin got = minimize_box_auto(f, lo, hi, tol, 4.0);

    RelaxationResult res;
    res.theta.assign(got.x.begin(), got.x.begin() + m);
    res.y = assemble_y(got.x);
    res.value = got.value;
    res.iterations = 0;
    res.gap_estimate = (dims >= 3 ? 1e-3 : 1e-6) * (1.0 + std::abs(got.value));
    return res;
}

}  // namespace

RelaxationResult solve_relaxation(const Instance& inst, const RelaxOptions& opt) {
    validate(inst);
    const int n = sample_count(inst);

    // A constraint set with a unique fractional point pins every label.
    const Vec ya = project_labels(Vec(n, 0.0), inst.labels, n);
    const Vec yb = project_labels(Vec(n, 1.0), inst.labels, n);
    bool pinned = true;
    std::vector<int> bits(n, 0);
    for (int s = 0; s < n; ++s) {
        if (std::abs(ya[s] - yb[s]) > 1e-9 || std::abs(ya[s] - std::round(ya[s])) > 1e-6)
            pinned = false;
        else
            bits[s] = static_cast<int>(std::round(ya[s]));
    }
    if (pinned) {
        const Instance solved = with_decomposition(
            inst, opt.extension == ExtensionChoice::Theorem1 ? ExtensionChoice::Decomposed
                                                             : opt.extension);
        const ExtensionSet ext = build_extensions(solved);
        const SupSolve sup = supervised_solve(solved, ext, bits, opt.tol);
        RelaxationResult res;
        res.theta = sup.theta;
        res.y = ya;
        res.value = sup.value;
        res.iterations = 1;
        res.gap_estimate = sup.cert;
        return res;
    }

    if (opt.extension == ExtensionChoice::Theorem1) return solve_theorem1_relaxation(inst);

    const Instance solved = with_decomposition(inst, opt.extension);
    const ExtensionSet ext = build_extensions(solved);

    std::optional<double> upper;
    if (opt.polish && n <= 20) {
        const auto members = enumerate_members(solved.labels, n);
        const auto mem = nearest_member(members, project_labels(Vec(n, 0.5), solved.labels, n));
        if (mem) upper = supervised_solve(solved, ext, *mem, opt.tol).value;
    }
    return relax_core(solved, ext, opt.budget, upper);
}

namespace {

struct Node {
    LabelConstraintSet cons;
    std::vector<int> members;  // indices into the root enumeration
    double lb = -kInf;
    long long id = 0;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.lb != b.lb) return a.lb > b.lb;
        return a.id > b.id;
    }
};

}  // namespace

BnBResult branch_and_bound(const Instance& inst, const BnBOptions& opt) {
    validate(inst);
    if (opt.extension == ExtensionChoice::Theorem1)
        throw config_error("branch and bound: theorem1 extension is not supported; "
                           "use trivial or decomposed");
    const int n = sample_count(inst);
    const Instance solved = with_decomposition(inst, opt.extension);
    const Instance trivial = with_decomposition(inst, ExtensionChoice::TrivialExt);
    build_extensions(solved);  // fail fast on unsupported combinations

    const std::vector<std::vector<int>> all_members = enumerate_members(solved.labels, n);
    if (all_members.empty()) throw infeasible_error("branch and bound: no feasible labeling");

    BnBResult res;
    res.incumbent_value = kInf;

    std::map<std::vector<int>, SupSolve> cache;
    auto supervised = [&](const std::vector<int>& bits) -> const SupSolve& {
        auto it = cache.find(bits);
        if (it != cache.end()) return it->second;
        Instance node_inst = solved;
        for (int s = 0; s < n; ++s) node_inst.labels.fixed[s] = bits[s];
        const ExtensionSet ext = build_extensions(node_inst);
        return cache.emplace(bits, supervised_solve(node_inst, ext, bits, 1e-10)).first->second;
    };
    auto offer_incumbent = [&](const std::vector<int>& bits) {
        const SupSolve& sup = supervised(bits);
        if (sup.value < res.incumbent_value) {
            res.incumbent_value = sup.value;
            res.incumbent_theta = sup.theta;
            res.incumbent_y = bits;
        }
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long long next_id = 0;
    {
        Node root;
        root.cons = solved.labels;
        root.members.resize(all_members.size());
        for (std::size_t i = 0; i < all_members.size(); ++i)
            root.members[i] = static_cast<int>(i);
        root.id = next_id++;
        open.push(std::move(root));
    }

    double lb_floor = kInf;  // min over pruned-node bounds and leaf certificates
    double queue_min_at_stop = kInf;
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (res.nodes_explored >= opt.node_cap) {
            queue_min_at_stop = node.lb;
            break;
        }
        ++res.nodes_explored;

        if (std::isfinite(res.incumbent_value) && node.lb >= res.incumbent_value - opt.tol) {
            queue_min_at_stop = node.lb;
            break;  // best-first: every remaining node is at least this bound
        }

        if (node.members.size() == 1) {
            const std::vector<int>& bits = all_members[node.members[0]];
            offer_incumbent(bits);
            const SupSolve& sup = supervised(bits);
            lb_floor = std::min(lb_floor, sup.value - sup.cert);
            continue;
        }

        Instance node_inst = solved;
        node_inst.labels = node.cons;
        bool relax_ok = true;
        RelaxationResult relax;
        try {
            const ExtensionSet ext = build_extensions(node_inst);
            std::optional<double> upper;
            if (std::isfinite(res.incumbent_value)) upper = res.incumbent_value;
            relax = relax_core(node_inst, ext, opt.node_budget, upper);
        } catch (const infeasible_error&) {
            relax_ok = false;
        }

        double node_lb = node.lb;
        if (relax_ok) {
            if (opt.ordering_check && opt.extension == ExtensionChoice::Decomposed) {
                Instance triv_inst = trivial;
                triv_inst.labels = node.cons;
                const ExtensionSet text = build_extensions(triv_inst);
                const double tval = phi_prime(triv_inst, text, relax.theta, relax.y);
                if (tval > relax.value + 1e-9 * (1.0 + std::abs(relax.value)))
                    ++res.ordering_violations;
            }
            node_lb = std::max(node_lb, relax.value - relax.gap_estimate);
            const auto rounded = nearest_member([&] {
                std::vector<std::vector<int>> sub;
                sub.reserve(node.members.size());
                for (int idx : node.members) sub.push_back(all_members[idx]);
                return sub;
            }(), relax.y);
            if (rounded) offer_incumbent(*rounded);
            if (std::isfinite(res.incumbent_value) &&
                node_lb >= res.incumbent_value - opt.tol) {
                lb_floor = std::min(lb_floor, node_lb);
                continue;
            }
        }

        // branch on the most fractional free label, ties to the lowest index
        int pick = -1;
        double score = -1.0;
        for (int s = 0; s < n; ++s) {
            if (node.cons.fixed.count(s)) continue;
            const double frac = relax_ok ? std::min(relax.y[s], 1.0 - relax.y[s]) : 0.0;
            if (frac > score + 1e-15) {
                score = frac;
                pick = s;
            }
        }
        if (pick < 0) {  // every label pinned yet several members: inconsistent pins
            lb_floor = std::min(lb_floor, node_lb);
            continue;
        }
        for (int bit = 0; bit <= 1; ++bit) {
            Node child;
            child.cons = node.cons;
            child.cons.fixed[pick] = bit;
            for (int idx : node.members)
                if (all_members[idx][pick] == bit) child.members.push_back(idx);
            if (child.members.empty()) continue;
            child.lb = node_lb;
            child.id = next_id++;
            open.push(std::move(child));
        }
    }

    const double global_lb = std::min(lb_floor, queue_min_at_stop);
    res.proven_gap = std::max(0.0, res.incumbent_value - global_lb);
    return res;
}

}  // namespace cvxext
