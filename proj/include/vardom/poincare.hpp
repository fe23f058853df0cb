#pragma once

#include "vardom/gallery.hpp"
#include "vardom/grid.hpp"
#include "vardom/util.hpp"

#include <string>
#include <vector>

namespace vardom {

/// One mean-oscillation inequality constant for one domain: the smallest C
/// with (mean |u - u_bar|^q)^(1/q) <= C (mean |grad u|^p)^(1/p).
struct PoincareEstimate {
    double q = 2.0;
    double p = 2.0;
    double constant = 0.0;
    std::string method; // "eigen" or "rayleigh-search"
    double domain_measure = 0.0;
};

/// Exact (p = q = 2) constant: 1/sqrt(lambda_2) where lambda_2 is the
/// smallest nonzero eigenvalue of the Neumann graph Laplacian of the inside
/// cells scaled by 1/h^2. Inverse power iteration with the constant vector
/// deflated; relative eigenvalue tolerance 1e-8. Throws on disconnected masks
/// and on iteration failure.
PoincareEstimate poincare_constant_22(const DomainMask& m, double rel_tol = 1e-8,
                                      int max_iterations = 200);

/// Certified lower bound on the (q, p) constant: the best mean-normalized
/// Rayleigh ratio over deterministic profiles (coordinates, first box modes,
/// a split plateau) plus `trials` random smooth fields. For p = q = 2 the
/// eigen constant is the supremum of this search.
PoincareEstimate poincare_lower_bound(const DomainMask& m, double q, double p, int trials,
                                      std::uint64_t seed = default_seed());

/// (C'_P + 1) * sup_i measure_i^(1/q - 1/p): the uniform embedding constant
/// induced by a common oscillation constant and a measure bound.
double uniform_sobolev_constant(const std::vector<double>& measures, double poincare_constant,
                                double q, double p);

struct PoincareSequenceResult {
    bool blow_up = false;
    std::vector<PoincareEstimate> constants;
    std::string verdict() const { return blow_up ? "blow-up-detected" : "bounded"; }
};

/// Runs the applicable estimator per domain (eigen for p = q = 2 on connected
/// masks, Rayleigh search otherwise) and flags a blow-up when the constants
/// grow monotonically by more than a factor 4 end to end.
PoincareSequenceResult is_poincare_sequence(const std::vector<DomainMask>& seq, double q, double p,
                                            int budget, std::uint64_t seed = default_seed());

struct LipschitzCheckResult {
    double sup_lipschitz = 0.0;
    bool uniform = false;
    double bound = 0.0;
    std::vector<double> min_thickness; // per graph spec
    bool thinning = false;             // thickness collapse along the sequence
};

/// Finite-difference scan of the graph families: sup of difference quotients
/// of every lower/upper graph, verdict against the user bound, and a separate
/// flag when the domain thickness collapses along the sequence.
LipschitzCheckResult uniform_lipschitz_check(const std::vector<GraphDomainSpec>& graphs,
                                             double user_bound, int samples = 1024);

} // namespace vardom
