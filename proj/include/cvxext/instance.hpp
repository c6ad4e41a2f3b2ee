#pragma once

// Problem data and its additive decomposition
//     phi(theta, y) = c(theta) + (1/|S|) sum_s d_s(theta, y_s),
// which reproduces omega(theta) + (C/|S|) sum_s l_s exactly for every
// decomposition (same summation order everywhere).  Samples with fixed
// labels are folded into the convex part; only free samples get extended
// terms.

#include <string>
#include <vector>

#include "cvxext/constraints.hpp"
#include "cvxext/envelope.hpp"
#include "cvxext/loss.hpp"
#include "cvxext/vec.hpp"

namespace cvxext {

enum class Decomposition {
    LossOnly,        // c = omega, d_s = C l_s; terms extended trivially
    FullTerm,        // c = 0,     d_s = omega + C l_s; closed-form envelopes
    LogisticPartial  // c = omega-free softplus part, d_s = omega - C c <x,theta> y
};
const char* to_string(Decomposition d);

struct Instance {
    std::vector<Vec> features;  // one vector per sample
    double C = 1.0;
    LossSpec loss;
    RegularizerSpec reg;
    LabelConstraintSet labels;
    Decomposition decomposition = Decomposition::FullTerm;
};

int sample_count(const Instance& inst);
int feature_dim(const Instance& inst);
void validate(const Instance& inst);

struct FixedTerm {
    TermExtension ext;
    int sample = 0;
    int label = 0;
};

struct ExtensionSet {
    std::vector<TermExtension> terms;  // free samples only
    std::vector<int> term_sample;      // sample index per term
    std::vector<FixedTerm> fixed_terms;
    bool omega_in_c = false;     // LossOnly
    bool softplus_in_c = false;  // LogisticPartial: (C c / |S|) sum log(1+e^r)
};

// Validates the (loss, regularizer, decomposition) combination and builds
// the per-term extensions.  Throws config_error for unsupported
// combinations, including L1 terms over a not-everywhere-bounded box (the
// envelope is discontinuous at integer labels there).
ExtensionSet build_extensions(const Instance& inst);

double convex_part_value(const Instance& inst, const ExtensionSet& ext, const Vec& theta);
Vec convex_part_subgradient(const Instance& inst, const ExtensionSet& ext,
                            const Vec& theta);

// Exact phi(theta, y) for an integer labeling, assembled along the
// decomposition path.
double objective_value(const Instance& inst, const ExtensionSet& ext, const Vec& theta,
                       const std::vector<int>& y);
double objective_value(const Instance& inst, const Vec& theta,
                       const std::vector<int>& y);

// Decomposed convex extension phi'(theta, y).  Entries of y at fixed
// samples are ignored (pinned to their fixed labels).
double phi_prime(const Instance& inst, const ExtensionSet& ext, const Vec& theta,
                 const Vec& y);

struct PhiPrimeGrad {
    Vec theta_grad;
    Vec y_grad;  // per sample; 0 at fixed samples; +-inf at integer free labels
};
PhiPrimeGrad phi_prime_subgradient(const Instance& inst, const ExtensionSet& ext,
                                   const Vec& theta, const Vec& y);

}  // namespace cvxext
