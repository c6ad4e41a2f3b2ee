#include "cvxext/surface.hpp"

#include <cmath>
#include <cstdio>

#include "cvxext/errors.hpp"
#include "cvxext/io.hpp"
#include "cvxext/tightest.hpp"

namespace cvxext {

std::string to_string(SurfaceExtension ext) {
    switch (ext) {
        case SurfaceExtension::Trivial: return "trivial";
        case SurfaceExtension::Decomposed: return "decomposed";
        case SurfaceExtension::Theorem1: return "theorem1";
        case SurfaceExtension::LogisticPartial: return "logistic-partial";
    }
    return "?";
}

std::vector<double> expand_range(const AxisRange& r) {
    if (!(r.step > 0.0)) throw config_error("range: step must be positive");
    if (r.lo > r.hi) throw config_error("range: lower end above upper end");
    std::vector<double> pts;
    const double slack = 1e-12 * std::max(1.0, std::abs(r.hi));
    for (double v = r.lo; v < r.hi - slack; v += r.step) pts.push_back(v);
    pts.push_back(r.hi);
    return pts;
}

std::vector<SurfaceRow> surface_rows(const SurfaceSpec& spec) {
    Instance inst;
    inst.features = {Vec{spec.x}};
    inst.C = spec.C;
    inst.loss = spec.loss;
    inst.reg = spec.reg;
    switch (spec.extension) {
        case SurfaceExtension::Trivial:
            inst.decomposition = Decomposition::LossOnly;
            break;
        case SurfaceExtension::LogisticPartial:
            inst.decomposition = Decomposition::LogisticPartial;
            break;
        default:
            inst.decomposition = Decomposition::FullTerm;
            break;
    }

    const std::vector<double> thetas = expand_range(spec.theta);
    const std::vector<double> ys = expand_range(spec.y);

    if (spec.unbounded_diagnostic) {
        if (inst.reg.kind != RegKind::L1)
            throw config_error("surface: the unbounded diagnostic applies to l1 only");
        double width = 1e4;
        for (double t : thetas) width = std::max(width, 100.0 * (1.0 + std::abs(t)));
        const Vec lo = box_lower(inst.reg, 1), hi = box_upper(inst.reg, 1);
        inst.reg.lower = {std::isfinite(lo[0]) ? lo[0] : -width};
        inst.reg.upper = {std::isfinite(hi[0]) ? hi[0] : width};
    }

    validate(inst);
    const ExtensionSet ext = build_extensions(inst);
    LabelSet Y;
    if (spec.extension == SurfaceExtension::Theorem1)
        Y = label_set_from_constraints(inst.labels, 1);

    std::vector<SurfaceRow> rows;
    rows.reserve(thetas.size() * ys.size());
    for (double t : thetas) {
        const Vec tv{t};
        for (double y : ys) {
            SurfaceRow row;
            row.theta = t;
            row.y = y;
            row.value = spec.extension == SurfaceExtension::Theorem1
                            ? tightest_extension_value(inst, Y, tv, Vec{y})
                            : phi_prime(inst, ext, tv, Vec{y});
            rows.push_back(row);
        }
    }
    return rows;
}

std::string surface_csv(const std::vector<SurfaceRow>& rows) {
    std::string out = "theta,y,value\n";
    for (const SurfaceRow& r : rows) {
        out += format_real(r.theta);
        out += ',';
        out += format_real(r.y);
        out += ',';
        out += format_real(r.value);
        out += '\n';
    }
    return out;
}

}  // namespace cvxext
