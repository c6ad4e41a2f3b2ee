#pragma once

// Envelope surfaces over a (theta, y) grid with one-dimensional theta,
// matching the plotted figures: rows at integer y reproduce the raw
// objective, fractional rows the chosen extension.

#include <string>
#include <vector>

#include "cvxext/instance.hpp"

namespace cvxext {

enum class SurfaceExtension { Trivial, Decomposed, Theorem1, LogisticPartial };
std::string to_string(SurfaceExtension ext);

// Inclusive lo:hi:step axis; the final point is clamped to hi.
struct AxisRange {
    double lo = 0.0, hi = 0.0, step = 1.0;
};
std::vector<double> expand_range(const AxisRange& r);

struct SurfaceSpec {
    LossSpec loss;
    RegularizerSpec reg;
    double C = 1.0;
    double x = 1.0;
    AxisRange theta;
    AxisRange y;
    SurfaceExtension extension = SurfaceExtension::Decomposed;
    // Evaluates the L1-unbounded limit by substituting a wide synthetic box
    // at fractional labels; integer rows stay exact. Reproduces the boundary
    // jump that makes the unbounded case unusable in a solver.
    bool unbounded_diagnostic = false;
};

struct SurfaceRow {
    double theta = 0.0, y = 0.0, value = 0.0;
};

std::vector<SurfaceRow> surface_rows(const SurfaceSpec& spec);

// Comma-separated grid: header "theta,y,value", 17 significant digits,
// byte-identical across runs.
std::string surface_csv(const std::vector<SurfaceRow>& rows);

}  // namespace cvxext
