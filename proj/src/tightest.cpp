#include "cvxext/tightest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxext/errors.hpp"
#include "cvxext/minimize.hpp"

namespace cvxext {

namespace {

constexpr double kResidualTol = 1e-10;  // barycentric interpolation residual
constexpr double kLambdaFloor = -1e-12; // negative coefficients below this reject
constexpr double kPosLambda = 1e-10;    // blocks at or below this are dropped

// Square solve with partial pivoting. A is row-major n x n, consumed.
bool gauss_solve(std::vector<Vec> A, Vec b, Vec& out) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-12) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r][c] * out[c];
        out[r] = s / A[r][r];
    }
    return true;
}

// Minimum-norm-ish solution of an overdetermined or singular system via
// ridge-regularized normal equations. The caller's residual check rejects
// any subset where the regularization actually matters.
bool least_squares(const std::vector<Vec>& A, const Vec& b, Vec& out) {
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    std::vector<Vec> N(cols, Vec(cols, 0.0));
    Vec rhs(cols, 0.0);
    for (int i = 0; i < cols; ++i) {
        for (int j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int r = 0; r < rows; ++r) s += A[r][i] * A[r][j];
            N[i][j] = s;
        }
        N[i][i] += 1e-12;
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += A[r][i] * b[r];
        rhs[i] = s;
    }
    return gauss_solve(std::move(N), std::move(rhs), out);
}

double residual_inf(const std::vector<Vec>& A, const Vec& b, const Vec& lam) {
    double worst = 0.0;
    for (std::size_t r = 0; r < A.size(); ++r) {
        double s = -b[r];
        for (std::size_t c = 0; c < lam.size(); ++c) s += A[r][c] * lam[c];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

}  // namespace

void validate(const LabelSet& Y) {
    if (Y.S_size < 1) throw config_error("label set: sample count must be positive");
    if (Y.members.empty()) throw domain_error("label set: no feasible labelings");
    for (const auto& mem : Y.members) {
        if (static_cast<int>(mem.size()) != Y.S_size)
            throw config_error("label set: member length != sample count");
        for (int b : mem)
            if (b != 0 && b != 1)
                throw config_error("label set: members must be binary");
    }
}

LabelSet label_set_from_constraints(const LabelConstraintSet& cons, int samples) {
    LabelSet Y;
    Y.S_size = samples;
    Y.members = enumerate_members(cons, samples);
    return Y;
}

std::vector<SupportSet> enumerate_support_sets(const LabelSet& Y, const Vec& y) {
    validate(Y);
    if (static_cast<int>(y.size()) != Y.S_size)
        throw domain_error("support sets: query labeling length != sample count");
    if (Y.S_size > 8)
        throw config_error("support sets: more than 8 samples is not supported");
    if (Y.members.size() > 20)
        throw config_error("support sets: more than 20 feasible labelings is not supported");

    const int S = Y.S_size;
    const int total = static_cast<int>(Y.members.size());
    const int r = std::min(S + 1, total);

    std::vector<SupportSet> found;
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;

    while (true) {
        // rows: one interpolation equation per sample plus the sum-to-one row
        std::vector<Vec> A(S + 1, Vec(r, 0.0));
        Vec b(S + 1, 0.0);
        for (int c = 0; c < r; ++c) {
            const auto& mem = Y.members[idx[c]];
            for (int s = 0; s < S; ++s) A[s][c] = static_cast<double>(mem[s]);
            A[S][c] = 1.0;
        }
        for (int s = 0; s < S; ++s) b[s] = y[s];
        b[S] = 1.0;

        Vec lam;
        bool solved = false;
        if (r == S + 1) solved = gauss_solve(A, b, lam);
        if (!solved) solved = least_squares(A, b, lam);

        if (solved && residual_inf(A, b, lam) < kResidualTol) {
            const double lmin = *std::min_element(lam.begin(), lam.end());
            if (lmin >= kLambdaFloor) {
                SupportSet sup;
                sup.member_index.assign(idx.begin(), idx.end());
                sup.lambdas = lam;
                for (double& l : sup.lambdas) l = std::max(l, 0.0);
                found.push_back(std::move(sup));
            }
        }

        // next lexicographic combination
        int pos = r - 1;
        while (pos >= 0 && idx[pos] == total - r + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }

    if (found.empty())
        throw domain_error("support sets: labeling lies outside the convex hull "
                           "of the feasible labelings");
    return found;
}

namespace {

// Value of one support set's coupled problem. Blocks with positive weight
// each get their own parameter vector; the heaviest block is eliminated by
// the coupling sum(lambda theta') = theta, and its box membership is kept
// by an exact penalty so the search space stays a plain box.
double inner_value(const Instance& inst, const ExtensionSet& ext, const LabelSet& Y,
                   const SupportSet& sup, const Vec& theta) {
    const int m = static_cast<int>(theta.size());
    std::vector<int> pos;
    for (std::size_t j = 0; j < sup.lambdas.size(); ++j)
        if (sup.lambdas[j] > kPosLambda) pos.push_back(static_cast<int>(j));
    if (pos.empty()) throw numeric_error("tightest: support set with no weight");

    int star = pos[0];
    for (int j : pos)
        if (sup.lambdas[j] > sup.lambdas[star]) star = j;

    if (pos.size() == 1)
        return objective_value(inst, ext, theta, Y.members[sup.member_index[star]]);

    std::vector<int> free_blocks;
    for (int j : pos)
        if (j != star) free_blocks.push_back(j);
    const int k = static_cast<int>(free_blocks.size());
    const double lam_star = sup.lambdas[star];
    const std::vector<int>& bits_star = Y.members[sup.member_index[star]];

    const Vec lo = box_lower(inst.reg, m);
    const Vec hi = box_upper(inst.reg, m);
    double xmax = 0.0;
    for (const auto& x : inst.features) xmax = std::max(xmax, norm_inf(x));
    const double penalty = 1e6 * (1.0 + inst.C) * (1.0 + xmax);

    auto eliminated = [&](const Vec& flat) {
        Vec e = theta;
        for (int j = 0; j < k; ++j) {
            const double l = sup.lambdas[free_blocks[j]];
            for (int i = 0; i < m; ++i) e[i] -= l * flat[j * m + i];
        }
        for (int i = 0; i < m; ++i) e[i] /= lam_star;
        return e;
    };
    auto box_gap = [&](const Vec& e) {
        double d = 0.0;
        for (int i = 0; i < m; ++i) {
            if (e[i] < lo[i]) d += lo[i] - e[i];
            if (e[i] > hi[i]) d += e[i] - hi[i];
        }
        return d;
    };
    auto value_at = [&](const Vec& flat) {
        double val = 0.0;
        Vec block(m);
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < m; ++i) block[i] = flat[j * m + i];
            val += sup.lambdas[free_blocks[j]] *
                   objective_value(inst, ext, block, Y.members[sup.member_index[free_blocks[j]]]);
        }
        const Vec e = eliminated(flat);
        val += lam_star * objective_value(inst, ext, e, bits_star);
        val += penalty * box_gap(e);
        return val;
    };

    Vec flat_lo(k * m), flat_hi(k * m), flat0(k * m);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < m; ++i) {
            flat_lo[j * m + i] = lo[i];
            flat_hi[j * m + i] = hi[i];
            flat0[j * m + i] = clamp(theta[i], lo[i], hi[i]);
        }

    Vec best_flat;
    double best = std::numeric_limits<double>::infinity();
    if (k * m <= 3) {
        const double radius = 4.0 * (1.0 + norm_inf(theta));
        BoxMin got = minimize_box_auto(value_at, flat_lo, flat_hi, 1e-10, radius);
        best = got.value;
        best_flat = got.x;
    } else {
        // projected subgradient fallback for wide support sets
        Vec cur = flat0;
        Vec grad(k * m);
        const double span = 2.0 * (1.0 + norm_inf(theta) + xmax);
        best = value_at(cur);
        best_flat = cur;
        for (int it = 1; it <= 10000; ++it) {
            const Vec e = eliminated(cur);
            PhiPrimeGrad ge;
            {
                Vec ye(bits_star.begin(), bits_star.end());
                ge = phi_prime_subgradient(inst, ext, e, ye);
            }
            Vec pen(m, 0.0);
            for (int i = 0; i < m; ++i) {
                if (e[i] < lo[i]) pen[i] = -penalty;
                if (e[i] > hi[i]) pen[i] = penalty;
            }
            Vec block(m);
            for (int j = 0; j < k; ++j) {
                const int jb = free_blocks[j];
                for (int i = 0; i < m; ++i) block[i] = cur[j * m + i];
                Vec yb(Y.members[sup.member_index[jb]].begin(),
                       Y.members[sup.member_index[jb]].end());
                const PhiPrimeGrad gj = phi_prime_subgradient(inst, ext, block, yb);
                for (int i = 0; i < m; ++i)
                    grad[j * m + i] = sup.lambdas[jb] *
                        (gj.theta_grad[i] - ge.theta_grad[i] - pen[i] / lam_star);
            }
            double gn = norm2(grad);
            if (gn < 1e-14) break;
            const double step = span / (gn * std::sqrt(static_cast<double>(it)));
            for (int i = 0; i < k * m; ++i)
                cur[i] = clamp(cur[i] - step * grad[i], flat_lo[i], flat_hi[i]);
            const double v = value_at(cur);
            if (v < best) {
                best = v;
                best_flat = cur;
            }
        }
    }

    // If the eliminated block ended a hair outside its box, shift the excess
    // onto the heaviest free block and keep the better of the two values.
    Vec e = eliminated(best_flat);
    double gap = box_gap(e);
    if (gap > 0.0) {
        int donor = 0;
        for (int j = 1; j < k; ++j)
            if (sup.lambdas[free_blocks[j]] > sup.lambdas[free_blocks[donor]]) donor = j;
        const double ld = sup.lambdas[free_blocks[donor]];
        Vec fixed = best_flat;
        for (int i = 0; i < m; ++i) {
            const double ce = clamp(e[i], lo[i], hi[i]);
            fixed[donor * m + i] =
                clamp(fixed[donor * m + i] + lam_star * (e[i] - ce) / ld, lo[i], hi[i]);
        }
        best = std::min(best, value_at(fixed));
    }
    return best;
}

}  // namespace

double tightest_extension_value(const Instance& inst, const LabelSet& Y,
                                const Vec& theta, const Vec& y) {
    validate(inst);
    validate(Y);
    if (Y.S_size != sample_count(inst))
        throw domain_error("tightest: label set sample count != instance");
    if (static_cast<int>(theta.size()) != feature_dim(inst))
        throw domain_error("tightest: theta dimension mismatch");
    if (static_cast<int>(y.size()) != Y.S_size)
        throw domain_error("tightest: labeling length != sample count");
    for (double ys : y)
        if (!(ys >= 0.0) || !(ys <= 1.0))
            throw domain_error("tightest: labels must lie in [0, 1]");
    if (!box_contains(inst.reg, theta, 1e-9 * (1.0 + norm_inf(theta))))
        throw domain_error("tightest: theta outside the parameter box");

    const std::vector<SupportSet> sups = enumerate_support_sets(Y, y);
    const ExtensionSet ext = build_extensions(inst);

    double best = std::numeric_limits<double>::infinity();
    for (const auto& sup : sups)
        best = std::min(best, inner_value(inst, ext, Y, sup, theta));
    return best;
}

}  // namespace cvxext
