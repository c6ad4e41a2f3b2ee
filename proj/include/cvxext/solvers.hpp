#pragma once

// Consumers of the extensions: Euclidean projection onto the label polytope,
// a projected-subgradient solver for the continuous relaxation, and a
// best-first branch-and-bound solver for the label MIP.

#include <string>
#include <vector>

#include "cvxext/constraints.hpp"
#include "cvxext/instance.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

enum class ExtensionChoice { TrivialExt, Decomposed, Theorem1 };
std::string to_string(ExtensionChoice choice);

// Euclidean projection of y onto [0,1]^S with fixed coordinates pinned, an
// optional cardinality slice (capped-simplex projection by bisection on the
// shift), and generic a'y <= b rows handled by Dykstra cycles.
Vec project_labels(const Vec& y, const LabelConstraintSet& cons, int samples);

struct RelaxOptions {
    ExtensionChoice extension = ExtensionChoice::Decomposed;
    int budget = 2000;          // subgradient iterations
    double tol = 1e-9;          // argument tolerance for exact supervised solves
    bool polish = true;         // derive a Polyak target from a rounded labeling
};

struct RelaxationResult {
    Vec theta;
    Vec y;
    double value = 0.0;
    int iterations = 0;
    double gap_estimate = 0.0;  // certified distance to the relaxation minimum
};

RelaxationResult solve_relaxation(const Instance& inst, const RelaxOptions& opt);

struct BnBOptions {
    ExtensionChoice extension = ExtensionChoice::Decomposed;
    double tol = 1e-6;
    long long node_cap = 10000;
    int node_budget = 400;      // relaxation iterations per interior node
    bool single_thread = true;  // kept for the CLI surface; evaluation is serial
    bool ordering_check = true; // decomposed node value dominates the trivial one
};

struct BnBResult {
    double incumbent_value = 0.0;
    Vec incumbent_theta;
    std::vector<int> incumbent_y;
    long long nodes_explored = 0;
    double proven_gap = 0.0;
    int ordering_violations = 0;  // stays 0; counted rather than asserted
};

BnBResult branch_and_bound(const Instance& inst, const BnBOptions& opt);

}  // namespace cvxext
