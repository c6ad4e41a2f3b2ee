#include "cvxext/loss.hpp"

#include <cmath>
#include <limits>

#include "cvxext/errors.hpp"

namespace cvxext {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void validate(const LossSpec& spec) {
    if (!(spec.c0 > 0.0) || !(spec.c1 > 0.0))
        throw config_error("loss class weights must be positive");
}

double log1pexp(double u) {
    // max(u, 0) + log(1 + exp(-|u|)), stable on both tails.
    return std::max(u, 0.0) + std::log1p(std::exp(-std::fabs(u)));
}

double sigmoid(double u) {
    if (u >= 0.0) {
        const double e = std::exp(-u);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

double loss_value(const LossSpec& spec, double r, int y) {
    if (y != 0 && y != 1) throw domain_error("loss_value: label must be 0 or 1");
    const double sign = y == 1 ? 1.0 : -1.0;   // (2y - 1)
    const double w = y == 1 ? spec.c1 : spec.c0;
    switch (spec.kind) {
        case LossKind::SquaredDifference: {
            const double d = r - static_cast<double>(y);
            return d * d;
        }
        case LossKind::Logistic:
            return w * log1pexp(-sign * r);
        case LossKind::Hinge:
            return w * std::max(0.0, 1.0 - sign * r);
        case LossKind::SquaredHinge: {
            const double h = std::max(0.0, 1.0 - sign * r);
            return 0.5 * w * h * h;
        }
    }
    throw config_error("loss_value: unknown loss kind");
}

Interval loss_subdifferential(const LossSpec& spec, double r, int y) {
    if (y != 0 && y != 1) throw domain_error("loss_subdifferential: label must be 0 or 1");
    const double w = y == 1 ? spec.c1 : spec.c0;
    switch (spec.kind) {
        case LossKind::SquaredDifference:
            return Interval::point(2.0 * (r - static_cast<double>(y)));
        case LossKind::Logistic:
            // d/dr log(1+e^{-s r}) = -s sigma(-s r), s = 2y-1
            return y == 1 ? Interval::point(-w * sigmoid(-r))
                          : Interval::point(w * sigmoid(r));
        case LossKind::Hinge:
            if (y == 1) {
                if (r < 1.0) return Interval::point(-w);
                if (r > 1.0) return Interval::point(0.0);
                return {-w, 0.0};
            }
            if (r > -1.0) return Interval::point(w);
            if (r < -1.0) return Interval::point(0.0);
            return {0.0, w};
        case LossKind::SquaredHinge:
            // C^1: derivative -w max(0, 1-r) resp. w max(0, 1+r)
            return y == 1 ? Interval::point(-w * std::max(0.0, 1.0 - r))
                          : Interval::point(w * std::max(0.0, 1.0 + r));
    }
    throw config_error("loss_subdifferential: unknown loss kind");
}

bool loss_has_decay(LossKind kind) { return kind != LossKind::SquaredDifference; }

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::SquaredDifference: return "squared_difference";
        case LossKind::Logistic: return "logistic";
        case LossKind::Hinge: return "hinge";
        case LossKind::SquaredHinge: return "squared_hinge";
    }
    return "?";
}

void validate(const RegularizerSpec& spec, int dim) {
    const auto check = [&](const Vec& v, const char* name) {
        if (!v.empty() && static_cast<int>(v.size()) != dim)
            throw config_error(std::string("regularizer ") + name +
                               " has wrong dimension");
    };
    check(spec.lower, "lower bound");
    check(spec.upper, "upper bound");
    const Vec lo = box_lower(spec, dim), hi = box_upper(spec, dim);
    for (int i = 0; i < dim; ++i)
        if (lo[i] > hi[i]) throw config_error("regularizer box has lower > upper");
}

double regularizer_value(const RegularizerSpec& spec, const Vec& theta) {
    if (spec.kind == RegKind::L1) return norm1(theta);
    const double s = norm2sq(theta);
    return spec.half ? 0.5 * s : s;
}

std::vector<Interval> regularizer_subdifferential(const RegularizerSpec& spec,
                                                  const Vec& theta) {
    std::vector<Interval> g(theta.size());
    if (spec.kind == RegKind::L2) {
        const double s = spec.half ? 1.0 : 2.0;
        for (std::size_t i = 0; i < theta.size(); ++i)
            g[i] = Interval::point(s * theta[i]);
        return g;
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (theta[i] > 0.0) g[i] = Interval::point(1.0);
        else if (theta[i] < 0.0) g[i] = Interval::point(-1.0);
        else g[i] = {-1.0, 1.0};
    }
    return g;
}

Vec box_lower(const RegularizerSpec& spec, int dim) {
    if (spec.lower.empty()) return Vec(dim, -kInf);
    return spec.lower;
}

Vec box_upper(const RegularizerSpec& spec, int dim) {
    if (spec.upper.empty()) return Vec(dim, kInf);
    return spec.upper;
}

bool box_contains(const RegularizerSpec& spec, const Vec& theta, double tol) {
    const int dim = static_cast<int>(theta.size());
    const Vec lo = box_lower(spec, dim), hi = box_upper(spec, dim);
    for (int i = 0; i < dim; ++i)
        if (theta[i] < lo[i] - tol || theta[i] > hi[i] + tol) return false;
    return true;
}

std::string to_string(RegKind kind) { return kind == RegKind::L1 ? "l1" : "l2"; }

}  // namespace cvxext
